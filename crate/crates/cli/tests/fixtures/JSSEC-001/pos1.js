const settings = { // @expect JSSEC-001
  option1: 1,
  option2: 2,
  option3: 3,
  option4: 4,
  option5: 5,
  option6: 6,
  option7: 7,
  option8: 8,
  option9: 9,
  option10: 10,
  option11: 11,
  option12: 12,
  option13: 13,
  option14: 14,
  option15: 15,
  option16: 16,
  option17: 17,
  option18: 18,
  option19: 19,
  option20: 20,
  option21: 21,
  option22: 22,
  option23: 23,
  option24: 24,
  option25: 25,
};
apply(settings);
