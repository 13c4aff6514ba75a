/**
 * Word cloud as an SVG string.
 *
 * Layout is a sunflower spiral: the i-th heaviest term sits at golden-angle
 * i on a radius proportional to sqrt(i), so the heaviest words cluster at
 * the center and the layout is a pure function of the term list. Font size
 * is linear in weight, which keeps it monotone: a heavier term never gets a
 * smaller font, and equal weights get equal fonts.
 */

import type { TermWeight } from "../types";
import { esc } from "./util";

export const MIN_FONT = 11;
export const MAX_FONT = 34;

export function fontSize(weight: number, wMin: number, wMax: number): number {
  if (wMax <= wMin) {
    // all weights equal; any shared size satisfies monotonicity
    return (MIN_FONT + MAX_FONT) / 2;
  }
  return MIN_FONT + ((MAX_FONT - MIN_FONT) * (weight - wMin)) / (wMax - wMin);
}

const GOLDEN_ANGLE = Math.PI * (3 - Math.sqrt(5));

export function renderWordCloud(terms: TermWeight[], width = 480, height = 320): string {
  if (terms.length === 0) {
    return `<p class="placeholder">no terms to display</p>`;
  }
  const ordered = [...terms].sort(
    (a, b) => b.weight - a.weight || a.term.localeCompare(b.term),
  );
  const wMax = ordered[0].weight;
  const wMin = ordered[ordered.length - 1].weight;
  const cx = width / 2;
  const cy = height / 2;
  const step = Math.min(width, height) / (2.2 * Math.sqrt(ordered.length));

  const texts = ordered.map((tw, i) => {
    const radius = step * Math.sqrt(i);
    const x = cx + radius * Math.cos(i * GOLDEN_ANGLE);
    const y = cy + radius * Math.sin(i * GOLDEN_ANGLE);
    const size = fontSize(tw.weight, wMin, wMax);
    return (
      `<text x="${x.toFixed(1)}" y="${y.toFixed(1)}" font-size="${size.toFixed(2)}"` +
      ` text-anchor="middle" data-weight="${tw.weight}">${esc(tw.term)}</text>`
    );
  });
  return (
    `<svg class="word-cloud" viewBox="0 0 ${width} ${height}"` +
    ` xmlns="http://www.w3.org/2000/svg" role="img">${texts.join("")}</svg>`
  );
}
