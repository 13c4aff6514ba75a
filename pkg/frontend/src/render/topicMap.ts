/**
 * Inter-topic map: 2-D scatter where each topic is a circle whose AREA is
 * proportional to its corpus prevalence (so radius goes as sqrt).
 */

import type { TopicMapPayload } from "../types";

const MAX_RADIUS = 28;

export function renderTopicMap(map: TopicMapPayload | null, size = 360): string {
  if (map === null || map.coords.length === 0) {
    return `<p class="placeholder">no topic map for this model</p>`;
  }
  const xs = map.coords.map((c) => c[0]);
  const ys = map.coords.map((c) => c[1]);
  const pad = MAX_RADIUS + 12;
  const scaleInto = (values: number[]) => {
    const lo = Math.min(...values);
    const hi = Math.max(...values);
    const span = hi - lo;
    // degenerate axis (coincident topics): park everything mid-axis
    if (span < 1e-12) return () => size / 2;
    return (v: number) => pad + ((v - lo) / span) * (size - 2 * pad);
  };
  const sx = scaleInto(xs);
  const sy = scaleInto(ys);
  const prevMax = Math.max(...map.prevalence);

  const circles = map.coords.map(([x, y], topic) => {
    const r = MAX_RADIUS * Math.sqrt(map.prevalence[topic] / prevMax);
    const cx = sx(x).toFixed(1);
    const cy = sy(y).toFixed(1);
    return (
      `<circle class="topic-${topic % 8}" cx="${cx}" cy="${cy}" r="${r.toFixed(2)}"` +
      ` data-prevalence="${map.prevalence[topic]}"></circle>` +
      `<text x="${cx}" y="${cy}" text-anchor="middle" dominant-baseline="middle">${topic}</text>`
    );
  });
  return (
    `<svg class="topic-map" viewBox="0 0 ${size} ${size}"` +
    ` xmlns="http://www.w3.org/2000/svg" role="img">${circles.join("")}</svg>`
  );
}
