"""
Newfluence - command-line entry point
"""
import logging
import sys
import os

# Add the current directory to Python path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.config.settings import LOG_LEVEL
from src.cli import main

# Configure logging
logging.basicConfig(
    level=LOG_LEVEL,
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    stream=sys.stderr
)


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
