// Copyright 2026 The capguard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Preload with `node --require capguard-shim.js entry.js`.
//
// Environment:
//   CAPGUARD_POLICY        policy file (default: capability-policy.json next
//                          to the entry script)
//   CAPGUARD_MODE          `coarse` or `fine`; overrides memberAccessTracing
//   CAPGUARD_ROOT_PACKAGE  package owning files outside any node_modules
'use strict';

const fs = require('fs');
const path = require('path');
const Module = require('module');

const HOOK = '__capguard_globals__';
const WRAPPER_NAMES = ['exports', 'require', 'module', '__filename', '__dirname'];

function loadPolicy() {
  const entry = process.argv[1] ? path.resolve(process.argv[1]) : process.cwd();
  const file = process.env.CAPGUARD_POLICY || path.join(path.dirname(entry), 'capability-policy.json');
  const policy = JSON.parse(fs.readFileSync(file, 'utf8'));
  if (typeof policy !== 'object' || policy === null || typeof policy.policyCoarse !== 'object') {
    throw new Error(`capguard: malformed policy ${file}`);
  }
  let fine = policy.memberAccessTracing === true;
  if (process.env.CAPGUARD_MODE === 'fine') fine = true;
  if (process.env.CAPGUARD_MODE === 'coarse') fine = false;
  return { file, entry, fine, coarse: policy.policyCoarse || {}, members: policy.policyFine || {} };
}

const policy = loadPolicy();

function setOf(section, pkg, key) {
  const entry = section[pkg];
  return new Set(entry && Array.isArray(entry[key]) ? entry[key] : []);
}

// Allowed members per object, from dotted fine entries.
function membersOf(pkg, key) {
  const out = new Map();
  for (const dotted of setOf(policy.members, pkg, key)) {
    const dot = dotted.lastIndexOf('.');
    if (dot <= 0) continue;
    const object = dotted.slice(0, dot);
    if (!out.has(object)) out.set(object, new Set());
    out.get(object).add(dotted.slice(dot + 1));
  }
  return out;
}

const allowances = new Map();
function allowanceOf(pkg) {
  let a = allowances.get(pkg);
  if (!a) {
    a = {
      modules: setOf(policy.coarse, pkg, 'modules'),
      globals: setOf(policy.coarse, pkg, 'globals'),
      moduleMembers: membersOf(pkg, 'modules'),
      globalMembers: membersOf(pkg, 'globals'),
    };
    allowances.set(pkg, a);
  }
  return a;
}

// A callable catch-all: every member, call and construction yields itself.
function makeDummy(mirrored) {
  const names = new Set(mirrored || []);
  let dummy;
  const target = function () {};
  dummy = new Proxy(target, {
    get(_, key) {
      if (key === Symbol.toPrimitive) return (hint) => (hint === 'number' ? 0 : '');
      if (key === Symbol.iterator) return function* () {};
      if (key === 'then') return undefined;
      if (key === 'toString' || key === 'toJSON') return () => '';
      if (key === 'valueOf') return () => 0;
      if (typeof key === 'symbol') return undefined;
      return dummy;
    },
    set() { return true; },
    has(_, key) { return names.has(key); },
    deleteProperty() { return true; },
    defineProperty() { return true; },
    apply() { return dummy; },
    construct() { return dummy; },
    ownKeys() { return Reflect.ownKeys(target).concat([...names].filter((n) => !Object.hasOwn(target, n))); },
    getOwnPropertyDescriptor(_, key) {
      if (Object.hasOwn(target, key)) return Reflect.getOwnPropertyDescriptor(target, key);
      return names.has(key) ? { value: dummy, writable: true, enumerable: true, configurable: true } : undefined;
    },
  });
  return dummy;
}

// A copy of `real` exposing only `allowed` members; other members are
// dummies. Calls reach the original because the object itself is allowed.
function restrict(real, allowed) {
  if (allowed.has('*') || (typeof real !== 'object' && typeof real !== 'function') || real === null) return real;
  const target = typeof real === 'function' ? function () {} : {};
  const proxy = new Proxy(target, {
    get(_, key) {
      if (typeof key === 'symbol' || key === 'prototype' || allowed.has(key)) return Reflect.get(real, key, real);
      return makeDummy();
    },
    set(_, key, value) { return Reflect.set(real, key, value); },
    has(_, key) { return key in real; },
    ownKeys() { return Reflect.ownKeys(real).filter((k) => k !== 'prototype' && k !== 'arguments' && k !== 'caller' || Object.hasOwn(target, k)); },
    getOwnPropertyDescriptor(_, key) {
      if (Object.hasOwn(target, key)) return Reflect.getOwnPropertyDescriptor(target, key);
      const d = Reflect.getOwnPropertyDescriptor(real, key);
      return d && { ...d, configurable: true };
    },
    apply(_, self, args) { return Reflect.apply(real, self === proxy ? real : self, args); },
    construct(_, args, newTarget) { return Reflect.construct(real, args, newTarget === proxy ? real : newTarget); },
  });
  return proxy;
}

const packageNames = new Map();
function packageAt(dir) {
  if (!packageNames.has(dir)) {
    let name = path.basename(dir);
    if (path.basename(path.dirname(dir)).startsWith('@')) name = `${path.basename(path.dirname(dir))}/${name}`;
    try {
      const manifest = JSON.parse(fs.readFileSync(path.join(dir, 'package.json'), 'utf8'));
      if (typeof manifest.name === 'string') name = manifest.name;
    } catch (_) {
      // keep the directory name
    }
    packageNames.set(dir, name);
  }
  return packageNames.get(dir);
}

let rootPackage = process.env.CAPGUARD_ROOT_PACKAGE;
function rootPackageName() {
  if (rootPackage) return rootPackage;
  for (let dir = path.dirname(policy.entry); ; dir = path.dirname(dir)) {
    if (fs.existsSync(path.join(dir, 'package.json'))) return (rootPackage = packageAt(dir));
    if (path.dirname(dir) === dir) return (rootPackage = '');
  }
}

// Deepest installed package enclosing `file`.
function packageOf(file) {
  if (!file) return rootPackageName();
  const parts = file.split(path.sep);
  const at = parts.lastIndexOf('node_modules');
  if (at < 0 || at + 1 >= parts.length) return rootPackageName();
  const depth = parts[at + 1].startsWith('@') ? 3 : 2;
  return packageAt(parts.slice(0, at + depth).join(path.sep));
}

function isPathSpecifier(id) {
  return id === '' || id.startsWith('.') || id.startsWith('/') || id.startsWith('file:') || path.isAbsolute(id);
}

function bare(id) {
  return id.startsWith('node:') ? id.slice(5) : id;
}

function moduleAllowed(allow, id) {
  return allow.modules.has(id) || allow.modules.has(bare(id)) || allow.modules.has(`node:${id}`);
}

function moduleMembers(allow, id) {
  const out = new Set();
  for (const key of [id, bare(id), `node:${id}`]) {
    for (const m of allow.moduleMembers.get(key) || []) out.add(m);
  }
  return out;
}

const originalRequire = Module.prototype.require;
Module.prototype.require = function capguardRequire(id) {
  if (typeof id !== 'string' || isPathSpecifier(id)) return originalRequire.apply(this, arguments);
  const allow = allowanceOf(packageOf(this.filename));
  if (!moduleAllowed(allow, id)) {
    if (Module.isBuiltin(id)) {
      const real = originalRequire.apply(this, arguments);
      return makeDummy(Object.keys(real));
    }
    return makeDummy();
  }
  const real = originalRequire.apply(this, arguments);
  return policy.fine ? restrict(real, moduleMembers(allow, id)) : real;
};

function globalValue(name, wrapper) {
  if (wrapper && WRAPPER_NAMES.includes(name)) return wrapper[name];
  return globalThis[name];
}

const tables = new Map();
function globalsTable(pkg) {
  let table = tables.get(pkg);
  if (!table) {
    table = new Map();
    tables.set(pkg, table);
  }
  return table;
}

// One object per file: wrapper values differ between files of a package.
function provideGlobals(pkg, wrapper) {
  const allow = allowanceOf(String(pkg));
  const table = globalsTable(String(pkg));
  const local = new Map();
  const resolve = (name) => {
    const real = globalValue(name, wrapper);
    if (real === undefined) return undefined;
    if (!allow.globals.has(name)) return makeDummy();
    return policy.fine ? restrict(real, allow.globalMembers.get(name) || new Set()) : real;
  };
  return new Proxy(Object.create(null), {
    get(_, name) {
      if (typeof name !== 'string') return undefined;
      if (local.has(name)) return local.get(name);
      if (wrapper && WRAPPER_NAMES.includes(name)) return resolve(name);
      const real = globalThis[name];
      const cached = table.get(name);
      if (cached && cached.real === real) return cached.value;
      const value = resolve(name);
      table.set(name, { real, value });
      return value;
    },
    set(_, name, value) {
      if (wrapper && WRAPPER_NAMES.includes(name)) local.set(name, value);
      else if (allow.globals.has(name)) globalThis[name] = value;
      return true;
    },
    has(_, name) { return typeof name === 'string' && (local.has(name) || globalValue(name, wrapper) !== undefined); },
  });
}

Object.defineProperty(globalThis, HOOK, { value: provideGlobals, enumerable: false, configurable: false, writable: false });
