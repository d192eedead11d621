fetch("https://api.example.com/x");
