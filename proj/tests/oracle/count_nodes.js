#!/usr/bin/env node
// Copyright 2026 The capguard Authors
// SPDX-License-Identifier: Apache-2.0
//
// Independent node counter used to freeze expected counts for the parser
// tests. Needs acorn on NODE_PATH. Prints "<path> <count> <script|module>"
// or "<path> FAIL <line>:<column>".
'use strict';
const fs = require('fs');
const acorn = require('acorn');

function countDistinct(root) {
  const seen = new Set();
  const stack = [root];
  while (stack.length) {
    const n = stack.pop();
    if (!n || typeof n !== 'object' || seen.has(n)) continue;
    seen.add(n);
    for (const key of Object.keys(n)) {
      if (key === 'loc' || key === 'range') continue;
      const v = n[key];
      if (Array.isArray(v)) {
        for (const c of v) if (c && typeof c.type === 'string') stack.push(c);
      } else if (v && typeof v === 'object' && typeof v.type === 'string') {
        stack.push(v);
      }
    }
  }
  return seen.size;
}

for (const file of process.argv.slice(2)) {
  const text = fs.readFileSync(file, 'utf8');
  const base = { ecmaVersion: 'latest', allowHashBang: true };
  const attempts = file.endsWith('.mjs') ? ['module'] : ['script', 'module'];
  let done = false;
  let firstError = null;
  for (const sourceType of attempts) {
    try {
      const opts = { ...base, sourceType };
      if (sourceType === 'script') opts.allowReturnOutsideFunction = true;
      const ast = acorn.parse(text, opts);
      console.log(`${file} ${countDistinct(ast)} ${sourceType}`);
      done = true;
      break;
    } catch (e) {
      if (!firstError) firstError = e;
    }
  }
  if (!done) console.log(`${file} FAIL ${firstError.loc ? firstError.loc.line + ':' + firstError.loc.column : '?'}`);
}
