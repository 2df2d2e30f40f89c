from galecert.cli import main
import sys

sys.exit(main())
