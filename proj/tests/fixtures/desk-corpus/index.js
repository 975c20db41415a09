const logger = require('logger');
const fs = require('fs');

logger.info(fs.readFileSync(__filename, 'utf8').length);
