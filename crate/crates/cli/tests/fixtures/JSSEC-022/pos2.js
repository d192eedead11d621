console.warn(user.apiKey); // @expect JSSEC-022
