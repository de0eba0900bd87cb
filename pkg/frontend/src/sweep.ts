/** Sensitivity sweep scatter plot with the API-reported trend line.
 *
 * The plot shows (w_focus, score_sum) points and a straight trend line
 * whose slope is exactly the API's OLS slope — the console never
 * recomputes it. Only the intercept is derived locally (the line through
 * the data centroid with the given slope, which is the OLS intercept),
 * because the API reports the slope alone.
 */

import type { SweepResponse } from "./api.js";
import { escapeXml } from "./adtree.js";

const PLOT_W = 560;
const PLOT_H = 320;
const MARGIN_LEFT = 64;
const MARGIN_RIGHT = 24;
const MARGIN_TOP = 24;
const MARGIN_BOTTOM = 48;

export const WIDTH = MARGIN_LEFT + PLOT_W + MARGIN_RIGHT;
export const HEIGHT = MARGIN_TOP + PLOT_H + MARGIN_BOTTOM;

/** Slope exactly as displayed next to the plot. */
export function formatSlope(slope: number | null): string {
  return slope === null ? "n/a" : slope.toPrecision(6);
}

export interface SweepGeometry {
  /** Pixel position of each sweep point, in response order. */
  points: { px: number; py: number }[];
  /** Trend line segment endpoints in pixels; null when no slope was reported. */
  line: { x1: number; y1: number; x2: number; y2: number } | null;
  xDomain: [number, number];
  yDomain: [number, number];
}

/** Pixel geometry for a sweep: pure, so tests can check the layout directly. */
export function sweepGeometry(response: SweepResponse): SweepGeometry {
  const xDomain: [number, number] = [0, 1];
  const ys = response.points.map((point) => point.score_sum);
  let yLo = Math.min(...ys);
  let yHi = Math.max(...ys);
  if (yLo === yHi) {
    yLo -= 1;
    yHi += 1;
  } else {
    const pad = 0.05 * (yHi - yLo);
    yLo -= pad;
    yHi += pad;
  }

  const px = (x: number) =>
    MARGIN_LEFT + ((x - xDomain[0]) / (xDomain[1] - xDomain[0])) * PLOT_W;
  const py = (y: number) => MARGIN_TOP + ((yHi - y) / (yHi - yLo)) * PLOT_H;

  const points = response.points.map((point) => ({
    px: px(point.w_focus),
    py: py(point.score_sum),
  }));

  let line: SweepGeometry["line"] = null;
  if (response.slope !== null && response.points.length > 0) {
    const n = response.points.length;
    const meanX = response.points.reduce((s, p) => s + p.w_focus, 0) / n;
    const meanY = response.points.reduce((s, p) => s + p.score_sum, 0) / n;
    const intercept = meanY - response.slope * meanX;
    line = {
      x1: px(xDomain[0]),
      y1: py(intercept + response.slope * xDomain[0]),
      x2: px(xDomain[1]),
      y2: py(intercept + response.slope * xDomain[1]),
    };
  }

  return { points, line, xDomain, yDomain: [yLo, yHi] };
}

function axisLabel(value: number): string {
  return value.toPrecision(3);
}

export function sweepSvg(response: SweepResponse): string {
  const geometry = sweepGeometry(response);
  const [yLo, yHi] = geometry.yDomain;
  const bottom = MARGIN_TOP + PLOT_H;
  const right = MARGIN_LEFT + PLOT_W;

  const parts: string[] = [];
  parts.push(
    `<line class="axis" x1="${MARGIN_LEFT}" y1="${bottom}" x2="${right}" y2="${bottom}"/>`,
    `<line class="axis" x1="${MARGIN_LEFT}" y1="${MARGIN_TOP}" x2="${MARGIN_LEFT}" y2="${bottom}"/>`,
    `<text class="axis-label" x="${MARGIN_LEFT}" y="${bottom + 20}" text-anchor="middle">0</text>`,
    `<text class="axis-label" x="${right}" y="${bottom + 20}" text-anchor="middle">1</text>`,
    `<text class="axis-label" x="${MARGIN_LEFT - 8}" y="${bottom}" text-anchor="end">${axisLabel(yLo)}</text>`,
    `<text class="axis-label" x="${MARGIN_LEFT - 8}" y="${MARGIN_TOP + 12}" text-anchor="end">${axisLabel(yHi)}</text>`,
    `<text class="axis-title" x="${MARGIN_LEFT + PLOT_W / 2}" y="${bottom + 40}" text-anchor="middle">${escapeXml(`${response.focus} weight`)}</text>`,
  );

  for (const point of geometry.points) {
    parts.push(
      `<circle class="sweep-point" cx="${point.px}" cy="${point.py}" r="3"/>`,
    );
  }
  if (geometry.line !== null) {
    parts.push(
      `<line class="trend-line" x1="${geometry.line.x1}" y1="${geometry.line.y1}" x2="${geometry.line.x2}" y2="${geometry.line.y2}"/>`,
    );
  }
  parts.push(
    `<text class="slope-label" x="${MARGIN_LEFT}" y="${MARGIN_TOP - 8}">` +
      `slope: ${escapeXml(formatSlope(response.slope))}` +
      `</text>`,
  );

  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
    `width="${WIDTH}" height="${HEIGHT}" class="sweep-plot">` +
    parts.join("") +
    `</svg>`
  );
}

/** Render the sweep panel: guidance text until data arrives, never blank. */
export function renderSweepPanel(response: SweepResponse | null): string {
  if (response === null || response.points.length === 0) {
    return (
      `<div class="sweep-empty">` +
      `<p>No sweep data yet. Pick a focus criterion and run a sensitivity sweep ` +
      `to see how the selections respond to its weight.</p>` +
      `</div>`
    );
  }
  const stability =
    response.stability_threshold === null
      ? "n/a"
      : response.stability_threshold.toPrecision(6);
  return (
    sweepSvg(response) +
    `<p class="sweep-summary">focus ${escapeXml(response.focus)}, ` +
    `${response.runs} runs, seed ${response.seed}, strategy ${escapeXml(response.strategy)} — ` +
    `slope ${escapeXml(formatSlope(response.slope))}, ` +
    `stability threshold ${escapeXml(stability)}</p>`
  );
}
