"""Allow ``python -m vp_calculus``."""

import sys

from vp_calculus.cli import main

sys.exit(main())
