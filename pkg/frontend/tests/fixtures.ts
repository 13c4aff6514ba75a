/** Mocked API payloads shaped exactly like the server's wire format. */

import type { Explanation, ItemRecord, Recommendation } from "../src/types";

export function makeItem(id: string, title: string, artist: string): ItemRecord {
  return {
    item_id: id,
    artist_name: artist,
    painting_title: title,
    painting_description: `A painting catalogued as ${id}.`,
    publishing_date: "1650",
    format: "portrait",
    size_class: "medium",
    technique: "oil on canvas",
    extra_texts: [],
  };
}

export const ITEMS: ItemRecord[] = [
  makeItem("NG001", "The Adoration of the Shepherds", "Hendrick van Zuylen"),
  makeItem("NG013", "Winter Landscape with Skaters", "Aert de Vries"),
  makeItem("NG020", "Portrait of a Lady in Blue", "Cornelis Brouwer"),
  makeItem("NG021", "Still Life with Oysters", "Maria van Oosterwijck"),
  makeItem("NG030", "The Calling of Saint Matthew", "Giovanni Ferri"),
];

export const EXPLANATION: Explanation = {
  prominent_topics: [
    { topic: 2, weight: 0.3068 },
    { topic: 1, weight: 0.2533 },
  ],
  term_weights: [
    { term: "saint", weight: 0.0306 },
    { term: "oil_canva", weight: 0.0232 },
    { term: "landscap", weight: 0.0169 },
    { term: "portrait", weight: 0.0121 },
  ],
  per_item_theta: {
    NG020: [0.2372, 0.2628, 0.2628, 0.2372],
    NG030: [0.2566, 0.2566, 0.2697, 0.2171],
  },
};

export const RECOMMENDATION: Recommendation = {
  user_id: "alice",
  arm: "lda",
  k: 5,
  items: [
    { item_id: "NG030", score: 0.9975 },
    { item_id: "NG020", score: 0.9814 },
    { item_id: "NG021", score: 0.9543 },
  ],
  explanation: EXPLANATION,
};
