// Canvas drawing for the two synchronized panes: a spatial top view
// (contacts, CoM, impact arrow) and the velocity plane (balance region,
// post-impact polytope, active vertices). Polygons are traced exactly as the
// service returned them; the only transformation is the affine view map.

import { ViewTransform, toScreen } from "./geometry.js";
import { MaxvelData, RegionData, StanceDocument, Vec2 } from "./types.js";

export interface Canvas2D {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  stroke(): void;
  fill(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  globalAlpha: number;
}

export function tracePolygon(ctx: Canvas2D, view: ViewTransform, vertices: Vec2[]): void {
  if (vertices.length === 0) return;
  ctx.beginPath();
  const [x0, y0] = toScreen(view, vertices[0]);
  ctx.moveTo(x0, y0);
  for (let i = 1; i < vertices.length; i++) {
    const [x, y] = toScreen(view, vertices[i]);
    ctx.lineTo(x, y);
  }
  ctx.closePath();
}

function dot(ctx: Canvas2D, view: ViewTransform, p: Vec2, r: number, color: string): void {
  const [x, y] = toScreen(view, p);
  ctx.beginPath();
  ctx.arc(x, y, r, 0, 2 * Math.PI);
  ctx.fillStyle = color;
  ctx.fill();
}

export function drawVelocityPane(
  ctx: Canvas2D,
  view: ViewTransform,
  width: number,
  height: number,
  region: RegionData | null,
  maxvel: MaxvelData | null,
  preComd: Vec2,
): void {
  ctx.clearRect(0, 0, width, height);
  if (region) {
    ctx.globalAlpha = 0.25;
    ctx.fillStyle = "#19a7c4";
    tracePolygon(ctx, view, region.inner_vertices);
    ctx.fill();
    ctx.globalAlpha = 1.0;
    ctx.strokeStyle = "#0f7d94";
    ctx.lineWidth = 1.5;
    tracePolygon(ctx, view, region.inner_vertices);
    ctx.stroke();
  }
  if (maxvel) {
    ctx.globalAlpha = 0.5;
    ctx.fillStyle = "#3255d8";
    tracePolygon(ctx, view, maxvel.post_impact_vertices);
    ctx.fill();
    ctx.globalAlpha = 1.0;
    // impulse vertices on the region boundary
    for (const idx of maxvel.active_vertices) {
      const v = maxvel.post_impact_vertices[Math.min(idx, maxvel.post_impact_vertices.length - 1)];
      if (v) dot(ctx, view, v, 4, "#d8322e");
    }
  }
  dot(ctx, view, preComd, 3, "#222222");
}

export function drawTopView(
  ctx: Canvas2D,
  view: ViewTransform,
  width: number,
  height: number,
  doc: StanceDocument,
): void {
  ctx.clearRect(0, 0, width, height);
  for (const contact of doc.contacts) {
    const corners: Vec2[] = [];
    for (const [sx, sy] of [[-1, -1], [1, -1], [1, 1], [-1, 1]] as const) {
      const local = [sx * contact.half_x, sy * contact.half_y, 0];
      const world: Vec2 = [
        contact.rotation[0][0] * local[0] + contact.rotation[0][1] * local[1] + contact.position[0],
        contact.rotation[1][0] * local[0] + contact.rotation[1][1] * local[1] + contact.position[1],
      ];
      corners.push(world);
    }
    ctx.globalAlpha = 0.4;
    ctx.fillStyle = "#7a6f5d";
    tracePolygon(ctx, view, corners);
    ctx.fill();
    ctx.globalAlpha = 1.0;
    ctx.strokeStyle = "#4d463a";
    ctx.lineWidth = 1;
    tracePolygon(ctx, view, corners);
    ctx.stroke();
  }
  dot(ctx, view, [doc.com[0], doc.com[1]], 4, "#1b8a3a");
  if (doc.impact) {
    const tip: Vec2 = [doc.impact.position[0], doc.impact.position[1]];
    const speed = Math.hypot(...doc.impact.v_ref);
    const dir: Vec2 = speed > 0
      ? [doc.impact.v_ref[0] / speed, doc.impact.v_ref[1] / speed]
      : [0, 0];
    const tail: Vec2 = [tip[0] - 0.2 * dir[0], tip[1] - 0.2 * dir[1]];
    ctx.strokeStyle = "#c7a200";
    ctx.lineWidth = 2;
    ctx.beginPath();
    const [tx, ty] = toScreen(view, tail);
    const [hx, hy] = toScreen(view, tip);
    ctx.moveTo(tx, ty);
    ctx.lineTo(hx, hy);
    ctx.stroke();
    dot(ctx, view, tip, 3, "#c7a200");
  }
}
