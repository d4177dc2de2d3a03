"""Entry point for ``python -m oscint``."""
import sys

from .cli import main

sys.exit(main())
