import sys

from qfclique.cli import main

sys.exit(main())
