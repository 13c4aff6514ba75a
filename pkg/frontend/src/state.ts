/**
 * View state for the gallery, synced to the server.
 *
 * The server is the source of truth: displayed ratings are only ever the
 * values it has acknowledged, and recommendations are only ever payloads it
 * returned. Nothing is rendered optimistically. Mutations (rating PUTs) go
 * through a queue so at most one is in flight at a time; replaying the same
 * rating sequence therefore reproduces the same view.
 */

import type { Api } from "./api";
import type { Arm, GalleryInit, Recommendation } from "./types";

export interface GalleryViewState {
  items: GalleryInit["items"];
  arms: Arm[];
  arm: Arm;
  sideBySide: boolean;
  /** item_id -> last server-acknowledged rating. */
  ratings: Record<string, number>;
  /** Current-arm payload, exactly as the server returned it. */
  recommendation: Recommendation | null;
  /** Other-arm payload when side-by-side comparison is on. */
  comparison: Recommendation | null;
  toast: string | null;
  /** Queued + in-flight rating mutations. */
  pending: number;
}

function otherArm(arm: Arm): Arm {
  return arm === "lda" ? "features" : "lda";
}

export class GalleryStore {
  private state: GalleryViewState;
  private listeners: Array<(state: GalleryViewState) => void> = [];
  private mutations: Promise<void> = Promise.resolve();

  constructor(
    private readonly backend: Api,
    private readonly userId: string,
    init: GalleryInit,
    private readonly k: number = 10,
  ) {
    this.state = {
      items: init.items,
      arms: init.arms,
      arm: init.arms.includes("lda") ? "lda" : init.arms[0],
      sideBySide: false,
      ratings: {},
      recommendation: null,
      comparison: null,
      toast: null,
      pending: 0,
    };
  }

  getState(): GalleryViewState {
    return this.state;
  }

  subscribe(listener: (state: GalleryViewState) => void): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private set(patch: Partial<GalleryViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  /**
   * PUT the rating, then refetch recommendations. The displayed rating
   * changes only once the server acknowledges; on any error the previous
   * state is kept and the failure surfaces as a toast.
   */
  rate(itemId: string, rating: number): Promise<void> {
    this.set({ pending: this.state.pending + 1 });
    this.mutations = this.mutations.then(async () => {
      try {
        const ack = await this.backend.rate(this.userId, itemId, rating);
        this.set({
          ratings: { ...this.state.ratings, [ack.item_id]: ack.rating },
          toast: null,
        });
        await this.refetch();
      } catch (err) {
        this.set({ toast: messageOf(err) });
      } finally {
        this.set({ pending: this.state.pending - 1 });
      }
    });
    return this.mutations;
  }

  /** Switch arms and refetch; ignored with a hint if the arm is not served. */
  async setArm(arm: Arm): Promise<void> {
    if (!this.state.arms.includes(arm)) {
      this.set({ toast: `${arm} arm is not available for this model` });
      return;
    }
    this.set({ arm });
    await this.refetch();
  }

  async setSideBySide(on: boolean): Promise<void> {
    this.set({ sideBySide: on, comparison: null });
    if (on) await this.refetch();
  }

  dismissToast(): void {
    this.set({ toast: null });
  }

  /** Pull fresh recommendation payloads for the current view settings. */
  async refetch(): Promise<void> {
    if (Object.keys(this.state.ratings).length === 0) return;
    try {
      const main = await this.backend.recommendations(this.userId, this.k, this.state.arm);
      let comparison: Recommendation | null = null;
      if (this.state.sideBySide && this.state.arms.includes(otherArm(this.state.arm))) {
        comparison = await this.backend.recommendations(this.userId, this.k, otherArm(this.state.arm));
      }
      this.set({ recommendation: main, comparison });
    } catch (err) {
      this.set({ toast: messageOf(err) });
    }
  }
}

function messageOf(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}
