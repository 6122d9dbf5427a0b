"""
Projective spectrum toolkit - Main Entry Point

Usage:
    python run_cli.py det tuple.json
    python run_cli.py sample tuple.json --lines 50 > points.csv
    python run_cli.py demo rotation --q 64
"""

import sys

from cli.main import main

if __name__ == '__main__':
    sys.exit(main())
