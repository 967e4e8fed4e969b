export type Vec2 = [number, number];
export type Vec3 = [number, number, number];
export type Mat3 = [Vec3, Vec3, Vec3];

export interface ContactDocument {
  rotation: Mat3;
  position: Vec3;
  half_x: number;
  half_y: number;
  mu: number;
  tau_z_min?: number;
  tau_z_max?: number;
}

export interface ImpactDocument {
  position: Vec3;
  rotation: Mat3;
  mu_impact: number;
  cr_min: number;
  cr_max: number;
  v_ref: Vec3;
  e_z?: Vec3;
  n_mu?: number;
  w_inv?: Mat3;
  crb?: { inertia: Mat3 };
  pre_comd?: Vec2;
  delta_t?: number;
  torque_ratio?: number;
}

export interface StanceDocument {
  contacts: ContactDocument[];
  mass: number;
  com: Vec3;
  gravity?: number;
  normal?: Vec3;
  dynamics?: Record<string, unknown>;
  impact?: ImpactDocument;
}

export interface OptionOverrides {
  eps_area?: number;
  max_dirs?: number;
  plane_height?: number;
  n_mu?: number;
  full_qdot?: boolean;
}

export interface RegionData {
  inner_vertices: Vec2[];
  outer_halfspaces: { G: Vec2[]; h: number[] };
  gap: number;
  area: number;
  directions_used: number;
  flags: { torque_limits: string; box_bound_active_rays: number[] };
}

export interface MaxvelData {
  speed: number;
  v_star: Vec3;
  sigma: number[];
  post_impact_vertices: Vec2[];
  active_vertices: number[];
  flags: Record<string, unknown>;
}

export interface ApiDocument<T> {
  meta: { version: string; command: string; options: Record<string, unknown> };
  data: T;
  warnings: string[];
}

export interface ApiErrorBody {
  code: string;
  stage: string;
  message: string;
  field_path?: string;
}
