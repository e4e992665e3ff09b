#!/usr/bin/env python3
"""Main entry point for gauss-sum."""

import sys
from gauss_summation.cli import main

if __name__ == "__main__":
    sys.exit(main())
