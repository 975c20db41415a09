#!/usr/bin/env node
'use strict';

const path = require('path');
const { greet } = require('greeter');
const stats = require('./lib/stats');

const names = process.argv.slice(2);
const encoded = Buffer.from(names.join(',')).toString('base64');

console.log(greet(names.length ? names : ['world']));
console.log(JSON.stringify({ encoded, mean: stats.mean([1, 2, 3, 4]) }));
console.log(path.basename(__filename), typeof module.exports, Math.max(...[3, 9, 4]));

setTimeout(() => {
  console.error('done');
  process.exitCode = names.length > 2 ? 3 : 0;
}, 1);
