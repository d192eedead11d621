switch (mode) {
  case 1:
    start();
    break;
  default:
    stop();
}
