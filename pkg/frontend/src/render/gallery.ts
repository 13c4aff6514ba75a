/** Render functions for the gallery: cards, rating stars, lists, chrome. */

import type { Arm, Explanation, ItemRecord, Recommendation } from "../types";
import { esc } from "./util";
import { renderTopicBars } from "./topicBars";
import { renderWordCloud } from "./wordCloud";

export const RATINGS = [1, 2, 3, 4, 5];

/**
 * Five star buttons. `acked` is the last server-acknowledged rating or null;
 * nothing else is ever shown as selected.
 */
export function renderRatingWidget(itemId: string, acked: number | null): string {
  const stars = RATINGS.map((r) => {
    const on = acked !== null && r <= acked;
    return (
      `<button class="star${on ? " on" : ""}" data-item="${esc(itemId)}"` +
      ` data-rating="${r}" aria-label="rate ${r}">${on ? "★" : "☆"}</button>`
    );
  });
  return `<span class="rating" data-item="${esc(itemId)}">${stars.join("")}</span>`;
}

/** The corpus ships no images, so cards degrade to title and artist text. */
export function renderItemCard(item: ItemRecord, acked: number | null): string {
  return (
    `<article class="card" data-item="${esc(item.item_id)}">` +
    `<h3>${esc(item.painting_title)}</h3>` +
    `<p class="artist">${esc(item.artist_name)}, ${esc(item.publishing_date)}</p>` +
    `<p class="desc">${esc(item.painting_description)}</p>` +
    `<p class="meta">${esc(item.technique)} · ${esc(item.size_class)}</p>` +
    renderRatingWidget(item.item_id, acked) +
    `</article>`
  );
}

/**
 * Recommendation list. Items the user has rated are filtered out even if a
 * payload were to contain one; the rated set and the recommended set never
 * overlap on screen.
 */
export function renderRecommendations(
  rec: Recommendation | null,
  ratings: Record<string, number>,
  itemIndex: Map<string, ItemRecord>,
): string {
  if (rec === null) {
    return `<p class="placeholder">rate a painting to see recommendations</p>`;
  }
  const visible = rec.items.filter((entry) => !(entry.item_id in ratings));
  if (visible.length === 0) {
    return `<p class="placeholder">nothing left to recommend</p>`;
  }
  const rows = visible.map((entry, i) => {
    const record = itemIndex.get(entry.item_id);
    const title = record ? `${record.painting_title} (${record.artist_name})` : entry.item_id;
    return (
      `<li class="rec" data-item="${esc(entry.item_id)}">` +
      `<span class="rank">${i + 1}.</span> ${esc(title)}` +
      `<span class="score">${entry.score.toFixed(4)}</span></li>`
    );
  });
  return `<ol class="recommendations" data-arm="${rec.arm}">${rows.join("")}</ol>`;
}

/** Arm switch; a missing features arm renders disabled with a hint. */
export function renderArmToggle(arms: Arm[], current: Arm): string {
  const buttons = (["lda", "features"] as Arm[]).map((arm) => {
    const available = arms.includes(arm);
    const classes = `arm${arm === current ? " active" : ""}`;
    const disabled = available ? "" : " disabled";
    return `<button class="${classes}" data-arm="${arm}"${disabled}>${arm}</button>`;
  });
  const hint = arms.includes("features")
    ? ""
    : `<small class="hint">features arm is not available for this model</small>`;
  return `<div class="arm-toggle">${buttons.join("")}${hint}</div>`;
}

export function renderExplanation(explanation: Explanation | null): string {
  const empty =
    explanation === null ||
    (explanation.prominent_topics.length === 0 && explanation.term_weights.length === 0);
  if (empty) {
    return `<p class="placeholder">no explanation available</p>`;
  }
  const chips = explanation.prominent_topics
    .map(
      (p) =>
        `<span class="chip topic-${p.topic % 8}">topic ${p.topic}` +
        ` · ${(p.weight * 100).toFixed(1)}%</span>`,
    )
    .join("");
  return (
    `<div class="explanation">` +
    `<div class="chips">${chips}</div>` +
    renderWordCloud(explanation.term_weights) +
    renderTopicBars(explanation.per_item_theta) +
    `</div>`
  );
}

export function renderToast(toast: string | null): string {
  if (toast === null) return "";
  return (
    `<div class="toast" role="alert">${esc(toast)}` +
    `<button class="dismiss" data-dismiss aria-label="dismiss">×</button></div>`
  );
}
