#!/usr/bin/env python3

import fraglaw.fraglaw

fraglaw.fraglaw.main()
