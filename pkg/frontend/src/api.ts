/** Thin typed adapter over fetch for the recommender API. */

import type {
  Arm,
  HealthPayload,
  ItemRecord,
  RatingAck,
  Recommendation,
  TopicMapPayload,
  TopicsPayload,
} from "./types";

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

async function errorDetail(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    // non-JSON error body; fall through to the generic message
  }
  return `request failed with status ${response.status}`;
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(path, init);
  if (!response.ok) {
    throw new ApiError(response.status, await errorDetail(response));
  }
  return (await response.json()) as T;
}

export const api = {
  health(): Promise<HealthPayload> {
    return request<HealthPayload>("/api/health");
  },

  async items(): Promise<ItemRecord[]> {
    const payload = await request<{ items: ItemRecord[] }>("/api/items");
    return payload.items;
  },

  item(itemId: string): Promise<ItemRecord> {
    return request<ItemRecord>(`/api/items/${encodeURIComponent(itemId)}`);
  },

  topics(topN: number): Promise<TopicsPayload> {
    return request<TopicsPayload>(`/api/topics?top_n=${topN}`);
  },

  /** K=1 models have no inter-topic map; the server answers 404. */
  async topicMap(): Promise<TopicMapPayload | null> {
    try {
      return await request<TopicMapPayload>("/api/topic-map");
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) return null;
      throw err;
    }
  },

  rate(userId: string, itemId: string, rating: number): Promise<RatingAck> {
    const path = `/api/users/${encodeURIComponent(userId)}/ratings/${encodeURIComponent(itemId)}`;
    return request<RatingAck>(path, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ rating }),
    });
  },

  recommendations(userId: string, k: number, arm: Arm): Promise<Recommendation> {
    const path = `/api/users/${encodeURIComponent(userId)}/recommendations?k=${k}&arm=${arm}`;
    return request<Recommendation>(path);
  },
};

export type Api = typeof api;
