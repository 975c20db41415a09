'use strict';

const fs = require('fs');

function readLines(path, done) {
  fs.readFile(path, 'utf8', (err, text) => {
    if (err) return done(err);
    const lines = text.split('\n').filter((line) => line.length > 0);
    done(null, lines);
  });
}

readLines('settings.txt', (err, lines) => {
  if (!err && lines.length > 1) readLines(lines[1], () => {});
});
