let apiKey = "sk_live_abc123"; // @expect JSSEC-008
send(apiKey);
