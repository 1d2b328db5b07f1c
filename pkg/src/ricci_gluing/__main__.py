from ricci_gluing.cli import main

raise SystemExit(main())
