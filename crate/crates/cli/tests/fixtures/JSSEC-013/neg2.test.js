console.log("hit");
debugger;
