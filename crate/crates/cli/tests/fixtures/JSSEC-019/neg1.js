const o = Object.create(null);
o[k] = v;
