from walshlab.cli import main

raise SystemExit(main())
