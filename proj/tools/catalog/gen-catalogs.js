// Regenerates the pinned catalogs under data/ from the running Node.js.
// Usage: node tools/catalog/gen-catalogs.js <out-dir>
'use strict';
const fs = require('fs');
const path = require('path');

const out = process.argv[2] || path.join(__dirname, '..', '..', 'data');
const revision = `node-${process.version} r1`;

// Value properties that are not objects.
const primitives = new Set(['undefined', 'NaN', 'Infinity']);
// Bindings of the CommonJS module wrapper; in scope for every CJS file.
const wrapper = ['require', 'module', 'exports', '__dirname', '__filename'];

const globals = new Set(Object.getOwnPropertyNames(globalThis).filter((n) => !primitives.has(n)));
for (const n of wrapper) globals.add(n);
const globalNames = [...globals].sort();

const modules = require('module').builtinModules.filter((m) => !m.startsWith('_')).sort();

const skip = new Set(['length', 'name', 'prototype', 'caller', 'arguments']);
const ownMembers = (v) => {
  if (v === null || (typeof v !== 'object' && typeof v !== 'function')) return [];
  return Object.getOwnPropertyNames(v).filter((k) => !skip.has(k) && /^[A-Za-z_$][\w$]*$/.test(k)).sort();
};
const wrapperValues = { require, module, exports, __dirname, __filename };

const lines = [];
for (const g of globalNames) {
  const v = g in wrapperValues ? wrapperValues[g] : globalThis[g];
  lines.push(['global', g, ...ownMembers(v)].join(' '));
}
for (const m of modules) {
  const v = require(m);
  const keys = Object.keys(v).filter((k) => /^[A-Za-z_$][\w$]*$/.test(k)).sort();
  lines.push(['module', m, ...keys].join(' '));
}

const write = (name, kind, body) =>
  fs.writeFileSync(path.join(out, name), `# capguard-${kind} ${revision}\n${body.join('\n')}\n`);
write('globals.txt', 'globals', globalNames);
write('builtin-modules.txt', 'builtin-modules', modules);
write('members.txt', 'members', lines);
