/** Deterministic SVG rendering of figure models. */

import { FigureModel } from "./figure.js";

const WIDTH = 640;
const HEIGHT = 460;
const MARGIN = { left: 70, right: 20, top: 24, bottom: 52 };

interface Scale {
  (value: number): number;
}

function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (value: number) => r0 + ((value - d0) / span) * (r1 - r0);
}

function niceTicks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo || 1;
  const rawStep = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const step = [1, 2, 2.5, 5, 10].map((m) => m * mag).find((s) => span / s <= count + 1) ?? mag * 10;
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let t = start; t <= hi + 1e-12; t += step) {
    ticks.push(Number(t.toFixed(10)));
  }
  return ticks;
}

function fmt(value: number): string {
  return Number(value.toFixed(6)).toString();
}

/** Render a figure model to a standalone SVG document. */
export function renderSvg(model: FigureModel): string {
  const xs = model.series.flatMap((s) => s.points.map((pt) => pt.x));
  const ys = model.series
    .flatMap((s) => s.points.flatMap((pt) => [pt.y - pt.err, pt.y + pt.err]))
    .concat(model.lines.map((line) => line.y));
  const x0 = Math.min(...xs);
  const x1 = Math.max(...xs);
  const pad = (Math.max(...ys) - Math.min(...ys)) * 0.06 || 0.1;
  const y0 = Math.min(...ys) - pad;
  const y1 = Math.max(...ys) + pad;

  const sx = linearScale(x0, x1, MARGIN.left, WIDTH - MARGIN.right);
  const sy = linearScale(y0, y1, HEIGHT - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`
  );

  // axes and ticks
  const axisY = HEIGHT - MARGIN.bottom;
  parts.push(
    `<line x1="${MARGIN.left}" y1="${axisY}" x2="${WIDTH - MARGIN.right}" y2="${axisY}" stroke="black"/>`,
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" y2="${axisY}" stroke="black"/>`
  );
  for (const t of niceTicks(x0, x1)) {
    const x = fmt(sx(t));
    parts.push(
      `<line x1="${x}" y1="${axisY}" x2="${x}" y2="${axisY + 5}" stroke="black"/>`,
      `<text x="${x}" y="${axisY + 20}" font-size="12" text-anchor="middle">${fmt(t)}</text>`
    );
  }
  for (const t of niceTicks(y0, y1)) {
    const y = fmt(sy(t));
    parts.push(
      `<line x1="${MARGIN.left - 5}" y1="${y}" x2="${MARGIN.left}" y2="${y}" stroke="black"/>`,
      `<text x="${MARGIN.left - 9}" y="${y}" font-size="12" text-anchor="end" dominant-baseline="middle">${fmt(t)}</text>`
    );
  }
  parts.push(
    `<text x="${(MARGIN.left + WIDTH - MARGIN.right) / 2}" y="${HEIGHT - 14}" font-size="14" text-anchor="middle">${model.xLabel}</text>`,
    `<text x="18" y="${(MARGIN.top + axisY) / 2}" font-size="14" text-anchor="middle" transform="rotate(-90 18 ${(MARGIN.top + axisY) / 2})">${model.yLabel}</text>`
  );

  // horizontal reference lines (black, solid or dotted)
  for (const line of model.lines) {
    const y = fmt(sy(line.y));
    const dash = line.dashed ? ` stroke-dasharray="6 4"` : "";
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${WIDTH - MARGIN.right}" y2="${y}" stroke="black"${dash} data-ref="${fmt(line.y)}"/>`,
      `<text x="${WIDTH - MARGIN.right - 4}" y="${fmt(sy(line.y) - 5)}" font-size="11" text-anchor="end">${line.label}</text>`
    );
  }

  // data series with error bars
  for (const series of model.series) {
    const dash = series.dashed ? ` stroke-dasharray="6 4"` : "";
    const coords = series.points
      .map((pt) => `${fmt(sx(pt.x))},${fmt(sy(pt.y))}`)
      .join(" ");
    parts.push(
      `<polyline points="${coords}" fill="none" stroke="${series.color}" stroke-width="1.6"${dash} data-series="${series.label}"/>`
    );
    for (const pt of series.points) {
      const x = fmt(sx(pt.x));
      if (pt.err > 0) {
        parts.push(
          `<line x1="${x}" y1="${fmt(sy(pt.y - pt.err))}" x2="${x}" y2="${fmt(sy(pt.y + pt.err))}" stroke="${series.color}" stroke-width="1"/>`
        );
      }
      parts.push(
        `<circle cx="${x}" cy="${fmt(sy(pt.y))}" r="2.4" fill="${series.color}" data-x="${fmt(pt.x)}" data-y="${fmt(pt.y)}"/>`
      );
    }
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
