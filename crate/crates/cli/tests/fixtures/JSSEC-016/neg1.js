var body = JSON.stringify({ user: inputData });
send(body);
