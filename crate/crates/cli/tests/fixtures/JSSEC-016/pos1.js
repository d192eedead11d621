var name = '{"user": "' + inputData + '"}'; // @expect JSSEC-016
send(name);
