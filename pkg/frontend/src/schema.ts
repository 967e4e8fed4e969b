// Client-side stance validation mirroring the server rules, so documents are
// schema-valid before dispatch and import errors carry a field path.

import { ContactDocument, ImpactDocument, Mat3, StanceDocument, Vec3 } from "./types.js";

export class SchemaViolation extends Error {
  constructor(public fieldPath: string, message: string) {
    super(`${fieldPath}: ${message}`);
  }
}

const CONTACT_KEYS = new Set(["rotation", "position", "half_x", "half_y", "mu", "tau_z_min", "tau_z_max"]);
const STANCE_KEYS = new Set(["contacts", "mass", "com", "gravity", "normal", "dynamics", "impact"]);
const IMPACT_KEYS = new Set([
  "position", "rotation", "e_z", "mu_impact", "cr_min", "cr_max",
  "n_mu", "w_inv", "crb", "pre_comd", "v_ref", "delta_t", "torque_ratio",
]);

function isFiniteNumber(v: unknown): v is number {
  return typeof v === "number" && Number.isFinite(v);
}

function checkVec(v: unknown, size: number, path: string): void {
  if (!Array.isArray(v) || v.length !== size || !v.every(isFiniteNumber)) {
    throw new SchemaViolation(path, `expected ${size} finite numbers`);
  }
}

function checkMat3(m: unknown, path: string): void {
  if (!Array.isArray(m) || m.length !== 3) {
    throw new SchemaViolation(path, "expected a 3x3 matrix");
  }
  m.forEach((row, i) => checkVec(row, 3, `${path}[${i}]`));
}

function checkRotation(m: Mat3, path: string): void {
  checkMat3(m, path);
  // R'R == I within a loose client-side tolerance
  for (let i = 0; i < 3; i++) {
    for (let j = 0; j < 3; j++) {
      let dot = 0;
      for (let k = 0; k < 3; k++) dot += m[k][i] * m[k][j];
      const target = i === j ? 1 : 0;
      if (Math.abs(dot - target) > 1e-6) {
        throw new SchemaViolation(path, "not orthonormal");
      }
    }
  }
}

function checkKeys(obj: Record<string, unknown>, allowed: Set<string>, required: string[], path: string): void {
  for (const key of Object.keys(obj)) {
    if (!allowed.has(key)) throw new SchemaViolation(`${path}.${key}`, "unknown field");
  }
  for (const key of required) {
    if (!(key in obj)) throw new SchemaViolation(`${path}.${key}`, "missing field");
  }
}

function validateContact(c: ContactDocument, path: string): void {
  checkKeys(c as unknown as Record<string, unknown>, CONTACT_KEYS,
    ["rotation", "position", "half_x", "half_y", "mu"], path);
  checkRotation(c.rotation, `${path}.rotation`);
  checkVec(c.position, 3, `${path}.position`);
  for (const field of ["half_x", "half_y", "mu"] as const) {
    if (!isFiniteNumber(c[field]) || c[field] <= 0) {
      throw new SchemaViolation(`${path}.${field}`, "must be positive");
    }
  }
  const lo = c.tau_z_min ?? -1e9;
  const hi = c.tau_z_max ?? 1e9;
  if (lo > hi) throw new SchemaViolation(`${path}.tau_z_min`, "exceeds tau_z_max");
}

function norm3(v: Vec3): number {
  return Math.hypot(v[0], v[1], v[2]);
}

function validateImpact(imp: ImpactDocument, path: string): void {
  checkKeys(imp as unknown as Record<string, unknown>, IMPACT_KEYS,
    ["position", "rotation", "mu_impact", "cr_min", "cr_max", "v_ref"], path);
  checkVec(imp.position, 3, `${path}.position`);
  checkRotation(imp.rotation, `${path}.rotation`);
  checkVec(imp.v_ref, 3, `${path}.v_ref`);
  if (!isFiniteNumber(imp.mu_impact) || imp.mu_impact <= 0) {
    throw new SchemaViolation(`${path}.mu_impact`, "must be positive");
  }
  if (!(isFiniteNumber(imp.cr_min) && isFiniteNumber(imp.cr_max)
    && imp.cr_min >= 0 && imp.cr_min <= imp.cr_max && imp.cr_max <= 1)) {
    throw new SchemaViolation(`${path}.cr_min`, "need 0 <= cr_min <= cr_max <= 1");
  }
  if (imp.n_mu !== undefined && (!Number.isInteger(imp.n_mu) || imp.n_mu < 3)) {
    throw new SchemaViolation(`${path}.n_mu`, "must be an integer >= 3");
  }
  if (imp.e_z !== undefined) {
    checkVec(imp.e_z, 3, `${path}.e_z`);
    if (Math.abs(norm3(imp.e_z) - 1) > 1e-6) {
      throw new SchemaViolation(`${path}.e_z`, "must be a unit vector");
    }
  }
  if (!("w_inv" in imp) && !("crb" in imp)) {
    throw new SchemaViolation(`${path}.w_inv`, "one of w_inv or crb is required");
  }
  if (imp.w_inv !== undefined) checkMat3(imp.w_inv, `${path}.w_inv`);
  if (imp.crb !== undefined) checkMat3(imp.crb.inertia, `${path}.crb.inertia`);
  if (imp.pre_comd !== undefined) checkVec(imp.pre_comd, 2, `${path}.pre_comd`);
}

export function validateStance(doc: StanceDocument): void {
  checkKeys(doc as unknown as Record<string, unknown>, STANCE_KEYS, ["contacts", "mass", "com"], "stance");
  if (!Array.isArray(doc.contacts) || doc.contacts.length < 1) {
    throw new SchemaViolation("contacts", "at least one contact required");
  }
  doc.contacts.forEach((c, i) => validateContact(c, `contacts[${i}]`));
  if (!isFiniteNumber(doc.mass) || doc.mass <= 0) {
    throw new SchemaViolation("mass", "must be positive");
  }
  checkVec(doc.com, 3, "com");
  const normal = doc.normal ?? [0, 0, 1];
  checkVec(normal, 3, "normal");
  if (Math.abs(norm3(normal as Vec3) - 1) > 1e-9) {
    throw new SchemaViolation("normal", "must be a unit vector");
  }
  const height = (doc.com[0] * normal[0]) + (doc.com[1] * normal[1]) + (doc.com[2] * normal[2]);
  if (height <= 0) throw new SchemaViolation("com", "CoM height along the normal must be positive");
  if (doc.gravity !== undefined && (!isFiniteNumber(doc.gravity) || doc.gravity <= 0)) {
    throw new SchemaViolation("gravity", "must be positive");
  }
  if (doc.impact !== undefined) validateImpact(doc.impact, "impact");
}
