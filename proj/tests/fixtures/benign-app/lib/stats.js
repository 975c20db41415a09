exports.mean = (xs) => xs.reduce((a, b) => a + b, 0) / xs.length;
exports.max = function max(xs) {
  return Math.max.apply(Math, xs);
};
