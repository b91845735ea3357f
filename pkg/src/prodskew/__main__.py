"""Allow `python -m prodskew`."""

import sys

from .cli import main

sys.exit(main())
