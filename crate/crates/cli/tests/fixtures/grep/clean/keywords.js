const input = readInput();
eval(input);
console.log(input);
document.write(input);

function trace(v) {
  debugger;
  return eval(v);
}
trace(input);
console.log(trace);
