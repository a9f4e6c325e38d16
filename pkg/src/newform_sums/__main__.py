import sys

from newform_sums.cli import main

sys.exit(main())
