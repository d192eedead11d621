const digest = crypto.createHash("md5").update(data).digest("hex"); // @expect JSSEC-020
store(digest);
