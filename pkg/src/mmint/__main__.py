import sys
from mmint.meta.cli import main


sys.exit(main())
