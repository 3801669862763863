#!/usr/bin/env python3
"""
joinmat entry point script.
This wrapper handles module imports and runs the main CLI.
"""

import sys
from pathlib import Path

# Make `src` importable when run from any directory
sys.path.insert(0, str(Path(__file__).parent))

from src.cli import main

if __name__ == '__main__':
    main()
