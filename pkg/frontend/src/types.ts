/** Mirror of the /api JSON contract. Field names match the wire format. */

export type Arm = "lda" | "features";

export interface HealthPayload {
  status: string;
  items: number;
  topics: number;
  arms: Arm[];
}

export interface ItemRecord {
  item_id: string;
  artist_name: string;
  painting_title: string;
  painting_description: string;
  publishing_date: string;
  format: string;
  size_class: string;
  technique: string;
  extra_texts: string[];
}

export interface TermWeight {
  term: string;
  weight: number;
}

export interface TopicWords {
  topic: number;
  words: TermWeight[];
}

export interface TopicsPayload {
  top_n: number;
  topics: TopicWords[];
}

export interface TopicMapPayload {
  coords: [number, number][];
  prevalence: number[];
}

export interface RatingAck {
  user_id: string;
  item_id: string;
  rating: number;
  n_ratings: number;
}

export interface ProminentTopic {
  topic: number;
  weight: number;
}

export interface Explanation {
  prominent_topics: ProminentTopic[];
  term_weights: TermWeight[];
  per_item_theta: Record<string, number[]>;
}

export interface ScoredItem {
  item_id: string;
  score: number;
}

/** What the client needs before the first paint. */
export interface GalleryInit {
  items: ItemRecord[];
  arms: Arm[];
}

export interface Recommendation {
  user_id: string;
  arm: Arm;
  k: number;
  items: ScoredItem[];
  explanation: Explanation | null;
}
