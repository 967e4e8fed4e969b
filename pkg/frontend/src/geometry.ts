// Planar helpers for readouts and the canvas view transform. Rendering never
// recomputes geometry: polygons are drawn vertex-for-vertex as returned by
// the service, through an affine map only.

import { Vec2 } from "./types.js";

export function polygonArea(vertices: Vec2[]): number {
  if (vertices.length < 3) return 0;
  let sum = 0;
  for (let i = 0; i < vertices.length; i++) {
    const [x0, y0] = vertices[i];
    const [x1, y1] = vertices[(i + 1) % vertices.length];
    sum += x0 * y1 - x1 * y0;
  }
  return 0.5 * sum;
}

export interface ViewTransform {
  scale: number;
  offsetX: number;
  offsetY: number;
}

/** Fit a bounding box (world units) into a canvas, y axis pointing up. */
export function fitView(
  points: Vec2[],
  width: number,
  height: number,
  marginFrac = 0.1,
): ViewTransform {
  let minX = Infinity, maxX = -Infinity, minY = Infinity, maxY = -Infinity;
  for (const [x, y] of points) {
    minX = Math.min(minX, x);
    maxX = Math.max(maxX, x);
    minY = Math.min(minY, y);
    maxY = Math.max(maxY, y);
  }
  if (!Number.isFinite(minX)) {
    return { scale: 1, offsetX: width / 2, offsetY: height / 2 };
  }
  const spanX = Math.max(maxX - minX, 1e-9);
  const spanY = Math.max(maxY - minY, 1e-9);
  const usable = 1 - 2 * marginFrac;
  const scale = Math.min((width * usable) / spanX, (height * usable) / spanY);
  const cx = (minX + maxX) / 2;
  const cy = (minY + maxY) / 2;
  return {
    scale,
    offsetX: width / 2 - scale * cx,
    offsetY: height / 2 + scale * cy,
  };
}

export function toScreen(view: ViewTransform, p: Vec2): Vec2 {
  return [view.scale * p[0] + view.offsetX, -view.scale * p[1] + view.offsetY];
}

export function fromScreen(view: ViewTransform, p: Vec2): Vec2 {
  return [(p[0] - view.offsetX) / view.scale, -(p[1] - view.offsetY) / view.scale];
}
