/** Entry point: fetch the model surface, then keep the DOM synced to the store. */

import { api } from "./api";
import { GalleryStore, GalleryViewState } from "./state";
import {
  renderArmToggle,
  renderExplanation,
  renderItemCard,
  renderRecommendations,
  renderToast,
} from "./render/gallery";
import { renderTopicMap } from "./render/topicMap";
import type { Arm, ItemRecord, TopicMapPayload } from "./types";

const USER_KEY = "topicrec-user";

function userId(): string {
  let uid = localStorage.getItem(USER_KEY);
  if (!uid) {
    uid = `web-${Date.now().toString(36)}`;
    localStorage.setItem(USER_KEY, uid);
  }
  return uid;
}

function view(
  state: GalleryViewState,
  itemIndex: Map<string, ItemRecord>,
  topicMap: TopicMapPayload | null,
): string {
  const cards = state.items
    .map((item) => renderItemCard(item, state.ratings[item.item_id] ?? null))
    .join("");
  const comparison =
    state.sideBySide && state.comparison
      ? `<h2>${state.comparison.arm} arm</h2>` +
        renderRecommendations(state.comparison, state.ratings, itemIndex)
      : "";
  const sideBySideBox =
    `<label class="side-by-side"><input type="checkbox" data-side-by-side` +
    `${state.sideBySide ? " checked" : ""}> side by side</label>`;
  return (
    `<header><h1>gallery recommender</h1>` +
    renderArmToggle(state.arms, state.arm) +
    sideBySideBox +
    (state.pending > 0 ? `<span class="pending">saving…</span>` : "") +
    `</header>` +
    `<main><section class="collection">${cards}</section>` +
    `<aside class="panel">` +
    `<h2>${state.arm} arm</h2>` +
    renderRecommendations(state.recommendation, state.ratings, itemIndex) +
    comparison +
    `<h2>why these</h2>` +
    renderExplanation(state.recommendation?.explanation ?? null) +
    `<h2>topic map</h2>` +
    renderTopicMap(topicMap) +
    `</aside></main>` +
    renderToast(state.toast)
  );
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  let store: GalleryStore;
  let itemIndex: Map<string, ItemRecord>;
  let topicMap: TopicMapPayload | null;
  try {
    const [health, items, map] = await Promise.all([api.health(), api.items(), api.topicMap()]);
    store = new GalleryStore(api, userId(), { items, arms: health.arms });
    itemIndex = new Map(items.map((item) => [item.item_id, item]));
    topicMap = map;
  } catch (err) {
    const detail = err instanceof Error ? err.message : String(err);
    root.innerHTML = `<p class="placeholder">cannot reach the recommender API: ${detail}</p>`;
    return;
  }

  const paint = (state: GalleryViewState) => {
    root.innerHTML = view(state, itemIndex, topicMap);
  };
  store.subscribe(paint);
  paint(store.getState());

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const star = target.closest<HTMLElement>("button.star");
    if (star && star.dataset.item && star.dataset.rating) {
      void store.rate(star.dataset.item, Number(star.dataset.rating));
      return;
    }
    const armButton = target.closest<HTMLElement>("button.arm");
    if (armButton && !armButton.hasAttribute("disabled") && armButton.dataset.arm) {
      void store.setArm(armButton.dataset.arm as Arm);
      return;
    }
    if (target.closest("[data-dismiss]")) {
      store.dismissToast();
    }
  });
  root.addEventListener("change", (event) => {
    const box = (event.target as HTMLElement).closest<HTMLInputElement>("[data-side-by-side]");
    if (box) void store.setSideBySide(box.checked);
  });
}

void boot();
