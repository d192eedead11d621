const box = document.createElement("div");
document.body.append(box);
