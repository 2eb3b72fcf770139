import sys

from mrlab.cli import main

sys.exit(main())
