const params = new URLSearchParams(location.search);
location.href = params.get("url"); // @expect JSSEC-015
