export {
  CONVERGENCE_SCHEMA,
  RUN_SCHEMA,
  SchemaError,
  loadCsv,
  parseCsv,
  parseMeta,
  seriesLabel,
} from "./csv.js";
export { render } from "./render.js";
export type { FigureKind, FigureRequest } from "./render.js";
export { main, parseArgs, UsageError } from "./cli.js";
