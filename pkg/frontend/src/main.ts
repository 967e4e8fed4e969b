// Browser wiring: sliders and canvases around the ExplorerStore.

import { createClient } from "./api.js";
import { fitView } from "./geometry.js";
import { drawTopView, drawVelocityPane } from "./render.js";
import { exportSession, importSession } from "./session.js";
import { ExplorerStore } from "./state.js";
import { StanceDocument, Vec2 } from "./types.js";

const SERVICE_URL = (window as unknown as { BALANCE_KIT_URL?: string }).BALANCE_KIT_URL
  ?? "http://localhost:8321";

const DEFAULT_DOC: StanceDocument = {
  contacts: [
    {
      rotation: [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
      position: [0, 0.1, 0],
      half_x: 0.11, half_y: 0.065, mu: 0.7,
      tau_z_min: -50, tau_z_max: 50,
    },
    {
      rotation: [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
      position: [0, -0.1, 0],
      half_x: 0.11, half_y: 0.065, mu: 0.7,
      tau_z_min: -50, tau_z_max: 50,
    },
  ],
  mass: 39,
  com: [0, 0, 0.78],
  impact: {
    position: [0.45, -0.25, 0.9],
    rotation: [[0, 0, -1], [0, 1, 0], [1, 0, 0]],
    mu_impact: 0.24,
    cr_min: 0, cr_max: 0.2,
    v_ref: [3, 0, 0],
    crb: { inertia: [[4, 0, 0], [0, 4.5, 0], [0, 0, 2]] },
  },
};

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
}

function main(): void {
  const store = new ExplorerStore(createClient(SERVICE_URL), DEFAULT_DOC);
  const topCanvas = byId<HTMLCanvasElement>("top-view");
  const velCanvas = byId<HTMLCanvasElement>("velocity-view");
  const muSlider = byId<HTMLInputElement>("mu-slider");
  const crSlider = byId<HTMLInputElement>("cr-slider");
  const comSlider = byId<HTMLInputElement>("com-slider");
  const dirSlider = byId<HTMLInputElement>("dir-slider");
  const speedOut = byId<HTMLElement>("speed-readout");
  const areaOut = byId<HTMLElement>("area-readout");
  const errorBox = byId<HTMLElement>("error-box");

  function render(): void {
    const s = store.getState();
    const top = topCanvas.getContext("2d");
    const vel = velCanvas.getContext("2d");
    if (!top || !vel) return;
    const spatial: Vec2[] = s.doc.contacts.flatMap((c): Vec2[] => [
      [c.position[0] - 0.25, c.position[1] - 0.25],
      [c.position[0] + 0.25, c.position[1] + 0.25],
    ]);
    drawTopView(top, fitView(spatial, topCanvas.width, topCanvas.height),
      topCanvas.width, topCanvas.height, s.doc);
    const velPoints: Vec2[] = (s.region?.inner_vertices ?? [[-1, -1], [1, 1]]).concat(
      s.maxvel?.post_impact_vertices ?? []);
    drawVelocityPane(vel, fitView(velPoints, velCanvas.width, velCanvas.height),
      velCanvas.width, velCanvas.height, s.region, s.maxvel,
      (s.doc.impact?.pre_comd ?? [0, 0]) as Vec2);
    areaOut.textContent = s.region ? `${s.regionArea.toFixed(4)} (m/s)^2` : "-";
    speedOut.textContent = s.maxvel ? `${s.maxvel.speed.toFixed(3)} m/s` : "-";
    if (s.error) {
      errorBox.textContent = s.error.field_path
        ? `${s.error.field_path}: ${s.error.message}`
        : s.error.message;
      errorBox.style.display = "block";
    } else {
      errorBox.style.display = "none";
    }
  }

  store.subscribe(render);

  muSlider.addEventListener("input", () => {
    const mu = Number(muSlider.value);
    store.preview((doc) => doc.contacts.forEach((c) => { c.mu = mu; }));
  });
  muSlider.addEventListener("change", () => void store.commit());

  crSlider.addEventListener("input", () => {
    const cr = Number(crSlider.value);
    store.preview((doc) => { if (doc.impact) doc.impact.cr_max = cr; });
  });
  crSlider.addEventListener("change", () => void store.commit());

  comSlider.addEventListener("input", () => {
    const z = Number(comSlider.value);
    store.preview((doc) => { doc.com[2] = z; });
  });
  comSlider.addEventListener("change", () => void store.commit());

  dirSlider.addEventListener("input", () => {
    const angle = Number(dirSlider.value);
    store.preview((doc) => {
      if (doc.impact) {
        const speed = Math.hypot(...doc.impact.v_ref) || 1;
        doc.impact.v_ref = [
          speed * Math.cos(angle), speed * Math.sin(angle), 0,
        ];
      }
    });
  });
  dirSlider.addEventListener("change", () => void store.commit());

  byId<HTMLButtonElement>("export-btn").addEventListener("click", () => {
    const blob = new Blob([exportSession(store.getState().doc)], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "stance.json";
    a.click();
    URL.revokeObjectURL(a.href);
  });

  byId<HTMLInputElement>("import-input").addEventListener("change", async (ev) => {
    const input = ev.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      await store.load(importSession(await file.text()));
    } catch (err) {
      errorBox.textContent = String(err);
      errorBox.style.display = "block";
    }
  });

  void store.commit();
}

main();
