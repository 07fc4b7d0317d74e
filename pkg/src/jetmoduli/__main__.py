"""Entry point for running jetmoduli as a module."""

import sys

from jetmoduli.cli import main

if __name__ == "__main__":
    sys.exit(main())
