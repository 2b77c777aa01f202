import sys

from asymphoton.cli import main

sys.exit(main())
