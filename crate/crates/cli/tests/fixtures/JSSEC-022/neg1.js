console.warn("request id", rid);
