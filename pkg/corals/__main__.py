from corals.cli import main

raise SystemExit(main())
