"""Module entry point: `python -m fracnodal` runs the CLI."""

import sys

from .cli import main

sys.exit(main())
