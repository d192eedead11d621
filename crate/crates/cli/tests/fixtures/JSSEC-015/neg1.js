location.href = "/home";
