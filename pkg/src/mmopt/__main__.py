import sys

from mmopt.bench.cli import main

sys.exit(main())
