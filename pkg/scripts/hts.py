#!/usr/bin/env python3
"""Run the hts command line from a source checkout."""

import sys
import os

# Add the parent directory to the path so we can import hyperseq modules
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from hyperseq.cli import cli_main


if __name__ == "__main__":
    sys.exit(cli_main())
