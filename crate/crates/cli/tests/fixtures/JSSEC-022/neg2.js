console.warn("login failed for", account.id);
