import { describe, expect, it } from "vitest";

import { renderTopicMap } from "../src/render/topicMap";
import { renderTopicBars } from "../src/render/topicBars";
import { EXPLANATION } from "./fixtures";
import type { TopicMapPayload } from "../src/types";

const MAP: TopicMapPayload = {
  coords: [
    [0.3278, 0.4114],
    [-0.6882, 0.1047],
    [0.1432, -0.6659],
    [0.2172, 0.1498],
  ],
  prevalence: [0.2491, 0.2509, 0.3012, 0.1988],
};

function radii(svg: string): number[] {
  return [...svg.matchAll(/ r="([\d.]+)"/g)].map((m) => Number(m[1]));
}

describe("topic map", () => {
  it("draws one circle per topic", () => {
    expect(radii(renderTopicMap(MAP))).toHaveLength(4);
  });

  it("makes circle area proportional to prevalence", () => {
    const rs = radii(renderTopicMap(MAP));
    const areas = rs.map((r) => r * r);
    // area ratios should match prevalence ratios against topic 0
    for (let k = 1; k < areas.length; k++) {
      const expected = MAP.prevalence[k] / MAP.prevalence[0];
      expect(areas[k] / areas[0]).toBeCloseTo(expected, 2);
    }
  });

  it("renders coincident topics without dividing by a zero span", () => {
    const degenerate: TopicMapPayload = {
      coords: [
        [0.5, 0.5],
        [0.5, 0.5],
      ],
      prevalence: [0.5, 0.5],
    };
    const svg = renderTopicMap(degenerate);
    expect(svg).toContain("circle");
    expect(svg).not.toContain("NaN");
  });

  it("renders a placeholder when the model has no map", () => {
    expect(renderTopicMap(null)).toContain("no topic map");
  });

  it("matches the snapshot", () => {
    expect(renderTopicMap(MAP)).toMatchSnapshot();
  });
});

describe("topic bars", () => {
  it("renders one figure per item, in sorted id order", () => {
    const html = renderTopicBars(EXPLANATION.per_item_theta);
    const ids = [...html.matchAll(/data-item="(NG\d+)"/g)].map((m) => m[1]);
    expect(ids).toEqual(["NG020", "NG030"]);
  });

  it("sizes each segment by its topic share", () => {
    const html = renderTopicBars({ A: [0.25, 0.75] });
    expect(html).toContain("width:25.00%");
    expect(html).toContain("width:75.00%");
  });

  it("renders a placeholder for an empty mixture table", () => {
    expect(renderTopicBars({})).toContain("placeholder");
  });

  it("matches the snapshot", () => {
    expect(renderTopicBars(EXPLANATION.per_item_theta)).toMatchSnapshot();
  });
});
