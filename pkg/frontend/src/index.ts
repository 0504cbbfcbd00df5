export { parseSweepCsv, SWEEP_COLUMNS } from "./csv.js";
export type { SweepRow, SweepTable } from "./csv.js";
export { buildFigureModel } from "./figure.js";
export type { FigureKind, FigureModel, RefLine, Series, SeriesPoint } from "./figure.js";
export { renderSvg } from "./svg.js";
export { main, parseArgs, runPlot } from "./plot.js";
export type { PlotOptions } from "./plot.js";
