import { describe, expect, it } from "vitest";

import { fitView, fromScreen } from "../src/geometry.js";
import { Canvas2D, drawVelocityPane, tracePolygon } from "../src/render.js";
import { RegionData, Vec2 } from "../src/types.js";

class RecordingContext implements Canvas2D {
  fillStyle: string = "";
  strokeStyle: string = "";
  lineWidth = 1;
  globalAlpha = 1;
  paths: Vec2[][] = [];
  private current: Vec2[] = [];

  clearRect(): void {}
  beginPath(): void { this.current = []; }
  moveTo(x: number, y: number): void { this.current.push([x, y]); }
  lineTo(x: number, y: number): void { this.current.push([x, y]); }
  closePath(): void { this.paths.push(this.current); }
  stroke(): void {}
  fill(): void {}
  arc(x: number, y: number): void { this.paths.push([[x, y]]); }
}

describe("rendering", () => {
  it("traces a polygon through the affine map only", () => {
    const vertices: Vec2[] = [[-0.3, -0.1], [0.4, -0.2], [0.2, 0.5]];
    const view = fitView(vertices, 400, 400);
    const ctx = new RecordingContext();
    tracePolygon(ctx, view, vertices);
    ctx.closePath();
    const drawn = ctx.paths[0];
    expect(drawn.length).toBe(vertices.length);
    drawn.forEach((p, i) => {
      const back = fromScreen(view, p);
      expect(back[0]).toBeCloseTo(vertices[i][0], 12);
      expect(back[1]).toBeCloseTo(vertices[i][1], 12);
    });
  });

  it("velocity pane draws the region vertices verbatim", () => {
    const region: RegionData = {
      inner_vertices: [[-0.5, -0.4], [0.6, -0.4], [0.6, 0.7], [-0.5, 0.7]],
      outer_halfspaces: { G: [[1, 0]], h: [0.6] },
      gap: 0,
      area: 1.21,
      directions_used: 4,
      flags: { torque_limits: "omitted", box_bound_active_rays: [] },
    };
    const view = fitView(region.inner_vertices, 300, 300);
    const ctx = new RecordingContext();
    drawVelocityPane(ctx, view, 300, 300, region, null, [0, 0]);
    // first closed path is the region fill
    const drawn = ctx.paths[0];
    expect(drawn.length).toBe(4);
    drawn.forEach((p, i) => {
      const back = fromScreen(view, p);
      expect(back[0]).toBeCloseTo(region.inner_vertices[i][0], 12);
      expect(back[1]).toBeCloseTo(region.inner_vertices[i][1], 12);
    });
  });
});
