/** Per-item topic mixtures as stacked horizontal bars. */

import { esc, pct } from "./util";

export function renderTopicBars(perItemTheta: Record<string, number[]>): string {
  const itemIds = Object.keys(perItemTheta).sort();
  if (itemIds.length === 0) {
    return `<p class="placeholder">no topic mixtures to display</p>`;
  }
  const figures = itemIds.map((itemId) => {
    const theta = perItemTheta[itemId];
    const segments = theta
      .map(
        (share, topic) =>
          `<span class="seg topic-${topic % 8}" style="width:${pct(share)}"` +
          ` title="topic ${topic}: ${share.toFixed(4)}"></span>`,
      )
      .join("");
    return (
      `<figure class="item-theta" data-item="${esc(itemId)}">` +
      `<figcaption>${esc(itemId)}</figcaption>` +
      `<div class="bar">${segments}</div></figure>`
    );
  });
  return `<div class="topic-bars">${figures.join("")}</div>`;
}
