try { run(); } catch (err) { /* ignored on purpose */ } // @expect JSSEC-004
