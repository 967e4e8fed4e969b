"""Stance, impact, and joint-space dynamics data: validation, file ingestion,
composite-rigid-body helpers.

Joint-space quantities (J, M, N, B, ...) are ingested as numeric data and
never derived from a robot description, which keeps the toolkit
robot-agnostic. All specs are immutable after loading.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalFailure, SchemaError, ValidationError

DEFAULT_GRAVITY = 9.81
DEFAULT_NORMAL = (0.0, 0.0, 1.0)
DEFAULT_N_MU = 16
DEFAULT_DELTA_T = 0.005
DEFAULT_TORQUE_RATIO = 1.0


def skew(v):
    """Cross-product matrix: skew(v) @ u == np.cross(v, u)."""
    x, y, z = np.asarray(v, dtype=float).reshape(3)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def _array(value, shape, path):
    try:
        a = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{path}: not numeric ({exc})") from None
    if a.shape != shape:
        raise SchemaError(f"{path}: expected shape {shape}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(path, "contains non-finite values")
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def _scalar(value, path):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"{path}: expected a number")
    if not np.isfinite(value):
        raise ValidationError(path, "must be finite")
    return float(value)


def _check_rotation(R, path):
    err = np.linalg.norm(R.T @ R - np.eye(3))
    if err > 1e-9:
        raise ValidationError(path, f"not orthonormal (||R'R - I|| = {err:.2e})")
    if abs(np.linalg.det(R) - 1.0) > 1e-6:
        raise ValidationError(path, "determinant is not +1")


@dataclass(frozen=True)
class ContactSpec:
    """One sustained rectangular contact.

    rotation maps local contact-frame vectors to the inertial frame; position
    is the contact center in meters; half_x/half_y are the patch half-extents.
    """

    rotation: np.ndarray
    position: np.ndarray
    half_x: float
    half_y: float
    mu: float
    tau_z_min: float = -np.inf
    tau_z_max: float = np.inf

    def validate(self, path="contact"):
        _check_rotation(self.rotation, f"{path}.rotation")
        for name in ("half_x", "half_y", "mu"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"{path}.{name}", "must be positive")
        if self.tau_z_min > self.tau_z_max:
            raise ValidationError(f"{path}.tau_z_min", "exceeds tau_z_max")
        return self


@dataclass(frozen=True)
class DynamicsData:
    """Joint-space dynamics snapshot for an (n+6)-DoF floating-base robot.

    J stacks the sustained contacts' 6-row Jacobians in the same per-contact
    (force; torque) order as the stacked wrench. j_imp (impact-point linear
    Jacobian, rows in the impact contact frame) and l_qd (impulse to
    joint-velocity jump map) are optional and only feed the post-impact
    joint rows of the max-velocity QP.
    """

    J: np.ndarray
    M: np.ndarray
    N: np.ndarray
    B: np.ndarray
    tau_min: np.ndarray
    tau_max: np.ndarray
    qdd: np.ndarray | None = None
    qd_pre: np.ndarray | None = None
    qd_min: np.ndarray | None = None
    qd_max: np.ndarray | None = None
    tau_pre: np.ndarray | None = None
    j_imp: np.ndarray | None = None
    l_qd: np.ndarray | None = None

    @property
    def dof(self):
        return self.M.shape[0]

    @property
    def n_joints(self):
        return self.B.shape[1]

    def validate(self, n_contacts, path="dynamics"):
        dof = self.M.shape[0]
        if self.M.shape != (dof, dof):
            raise ValidationError(f"{path}.M", "must be square")
        sym = np.max(np.abs(self.M - self.M.T))
        if sym > 1e-8:
            raise ValidationError(f"{path}.M", f"not symmetric (max asym {sym:.2e})")
        if np.linalg.eigvalsh(0.5 * (self.M + self.M.T)).min() <= 0:
            raise ValidationError(f"{path}.M", "not positive definite")
        if self.J.shape != (6 * n_contacts, dof):
            raise ValidationError(f"{path}.J", f"expected shape {(6 * n_contacts, dof)}, got {self.J.shape}")
        if self.N.shape != (dof,):
            raise ValidationError(f"{path}.N", f"expected length {dof}")
        n = self.B.shape[1]
        if self.B.shape != (dof, n):
            raise ValidationError(f"{path}.B", f"expected {dof} rows")
        for name, size in (("tau_min", n), ("tau_max", n), ("tau_pre", n),
                           ("qdd", dof), ("qd_pre", dof), ("qd_min", dof), ("qd_max", dof)):
            v = getattr(self, name)
            if v is not None and v.shape != (size,):
                raise ValidationError(f"{path}.{name}", f"expected length {size}")
        if np.any(self.tau_min > self.tau_max):
            raise ValidationError(f"{path}.tau_min", "exceeds tau_max")
        if self.j_imp is not None and self.j_imp.shape != (3, dof):
            raise ValidationError(f"{path}.j_imp", f"expected shape (3, {dof})")
        if self.l_qd is not None and self.l_qd.shape != (dof, 3):
            raise ValidationError(f"{path}.l_qd", f"expected shape ({dof}, 3)")
        return self

    def qdd_or_zero(self):
        return self.qdd if self.qdd is not None else np.zeros(self.dof)


@dataclass(frozen=True)
class ImpactSpec:
    """Intentional-impact description at one end-effector contact point.

    rotation maps contact-frame vectors to the inertial/CoM frame; e_z is the
    impacted surface's outward normal in the contact frame, so an approaching
    end-effector has a negative velocity component along it. w_inv is the 3x3
    impulse-to-contact-point-velocity map of the composite rigid body.
    """

    position: np.ndarray
    rotation: np.ndarray
    mu_impact: float
    cr_min: float
    cr_max: float
    v_ref: np.ndarray
    w_inv: np.ndarray
    e_z: np.ndarray = field(default_factory=lambda: _array((0.0, 0.0, 1.0), (3,), "e_z"))
    n_mu: int = DEFAULT_N_MU
    pre_comd: np.ndarray = field(default_factory=lambda: _array((0.0, 0.0), (2,), "pre_comd"))
    delta_t: float = DEFAULT_DELTA_T
    torque_ratio: float = DEFAULT_TORQUE_RATIO

    def validate(self, path="impact"):
        _check_rotation(self.rotation, f"{path}.rotation")
        if abs(np.linalg.norm(self.e_z) - 1.0) > 1e-9:
            raise ValidationError(f"{path}.e_z", "must be a unit vector")
        if self.mu_impact <= 0:
            raise ValidationError(f"{path}.mu_impact", "must be positive")
        if not (0.0 <= self.cr_min <= self.cr_max <= 1.0):
            raise ValidationError(f"{path}.cr_min", "need 0 <= cr_min <= cr_max <= 1")
        if self.n_mu < 3:
            raise ValidationError(f"{path}.n_mu", "must be at least 3")
        if self.delta_t <= 0:
            raise ValidationError(f"{path}.delta_t", "must be positive")
        w = self.w_inv
        if np.max(np.abs(w - w.T)) > 1e-9:
            raise ValidationError(f"{path}.w_inv", "not symmetric")
        if np.linalg.eigvalsh(0.5 * (w + w.T)).min() < -1e-12:
            raise ValidationError(f"{path}.w_inv", "not positive semidefinite")
        return self


@dataclass(frozen=True)
class StanceSpec:
    """Input universe for all computations: contacts, mass, CoM, gravity, normal."""

    contacts: tuple
    mass: float
    com: np.ndarray
    gravity: float = DEFAULT_GRAVITY
    normal: np.ndarray = field(default_factory=lambda: _array(DEFAULT_NORMAL, (3,), "normal"))
    dynamics: DynamicsData | None = None

    def validate(self):
        if len(self.contacts) < 1:
            raise ValidationError("contacts", "at least one contact required")
        for i, c in enumerate(self.contacts):
            c.validate(f"contacts[{i}]")
        if self.mass <= 0:
            raise ValidationError("mass", "must be positive")
        if abs(np.linalg.norm(self.normal) - 1.0) > 1e-12:
            raise ValidationError("normal", "must be a unit vector")
        if self.com_height <= 0:
            raise ValidationError("com", "CoM height along the normal must be positive")
        if self.gravity <= 0:
            raise ValidationError("gravity", "must be positive")
        if self.dynamics is not None:
            self.dynamics.validate(len(self.contacts))
        return self

    @property
    def n_contacts(self):
        return len(self.contacts)

    @property
    def com_height(self):
        return float(self.normal @ self.com)

    def centered(self):
        """Re-express the stance with the inertial origin directly under the CoM.

        Contact positions are shifted by -com_xy and the CoM planar
        coordinates become zero; this is the frame every balance-area formula
        assumes. Stances already centered are returned unchanged.
        """
        if abs(self.com[0]) < 1e-15 and abs(self.com[1]) < 1e-15:
            return self
        shift = np.array([self.com[0], self.com[1], 0.0])
        contacts = tuple(
            ContactSpec(c.rotation, _array(c.position - shift, (3,), "position"),
                        c.half_x, c.half_y, c.mu, c.tau_z_min, c.tau_z_max)
            for c in self.contacts
        )
        com = _array(self.com - shift, (3,), "com")
        return StanceSpec(contacts, self.mass, com, self.gravity, self.normal, self.dynamics)


def crb_inverse_inertia(mass, inertia, r):
    """Impulse-to-contact-point-velocity map of a composite rigid body.

    W = (1/m) I3 - [r]x inertia^-1 [r]x, with r the vector from the CoM to
    the contact point. Symmetric positive semidefinite for any valid inputs.
    """
    if mass <= 0:
        raise ValidationError("mass", "must be positive")
    inertia = np.asarray(inertia, dtype=float).reshape(3, 3)
    if np.max(np.abs(inertia - inertia.T)) > 1e-9:
        raise ValidationError("inertia", "must be symmetric")
    eigs = np.linalg.eigvalsh(0.5 * (inertia + inertia.T))
    if eigs.min() <= 0:
        raise NumericalFailure(f"inertia tensor is singular or indefinite (min eig {eigs.min():.3e})")
    rx = skew(r)
    w = np.eye(3) / mass - rx @ np.linalg.solve(inertia, rx)
    return 0.5 * (w + w.T)


_CONTACT_FIELDS = {"rotation", "position", "half_x", "half_y", "mu", "tau_z_min", "tau_z_max"}
_CONTACT_REQUIRED = {"rotation", "position", "half_x", "half_y", "mu"}
_STANCE_FIELDS = {"contacts", "mass", "com", "gravity", "normal", "dynamics", "impact"}
_STANCE_REQUIRED = {"contacts", "mass", "com"}
_DYNAMICS_FIELDS = {"J", "M", "N", "B", "qdd", "tau_min", "tau_max", "qd_pre",
                    "qd_min", "qd_max", "tau_pre", "j_imp", "l_qd"}
_DYNAMICS_REQUIRED = {"J", "M", "N", "B", "tau_min", "tau_max"}
_IMPACT_FIELDS = {"position", "rotation", "e_z", "mu_impact", "cr_min", "cr_max",
                  "n_mu", "w_inv", "crb", "pre_comd", "v_ref", "delta_t", "torque_ratio"}
_IMPACT_REQUIRED = {"position", "rotation", "mu_impact", "cr_min", "cr_max", "v_ref"}


def _check_keys(doc, allowed, required, path):
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: expected an object")
    unknown = set(doc) - allowed
    if unknown:
        raise SchemaError(f"{path}: unknown fields {sorted(unknown)}")
    missing = required - set(doc)
    if missing:
        raise SchemaError(f"{path}: missing fields {sorted(missing)}")


def _load_contact(doc, path):
    _check_keys(doc, _CONTACT_FIELDS, _CONTACT_REQUIRED, path)
    return ContactSpec(
        rotation=_array(doc["rotation"], (3, 3), f"{path}.rotation"),
        position=_array(doc["position"], (3,), f"{path}.position"),
        half_x=_scalar(doc["half_x"], f"{path}.half_x"),
        half_y=_scalar(doc["half_y"], f"{path}.half_y"),
        mu=_scalar(doc["mu"], f"{path}.mu"),
        tau_z_min=_scalar(doc.get("tau_z_min", -1e9), f"{path}.tau_z_min"),
        tau_z_max=_scalar(doc.get("tau_z_max", 1e9), f"{path}.tau_z_max"),
    ).validate(path)


def _load_dynamics(doc, n_contacts, path="dynamics"):
    _check_keys(doc, _DYNAMICS_FIELDS, _DYNAMICS_REQUIRED, path)
    dof = len(np.asarray(doc["M"]))
    n = np.asarray(doc["B"]).shape[1] if np.asarray(doc["B"]).ndim == 2 else 0
    if n == 0:
        raise SchemaError(f"{path}.B: expected a matrix")

    def opt(name, shape):
        return _array(doc[name], shape, f"{path}.{name}") if name in doc else None

    return DynamicsData(
        J=_array(doc["J"], (6 * n_contacts, dof), f"{path}.J"),
        M=_array(doc["M"], (dof, dof), f"{path}.M"),
        N=_array(doc["N"], (dof,), f"{path}.N"),
        B=_array(doc["B"], (dof, n), f"{path}.B"),
        tau_min=_array(doc["tau_min"], (n,), f"{path}.tau_min"),
        tau_max=_array(doc["tau_max"], (n,), f"{path}.tau_max"),
        qdd=opt("qdd", (dof,)),
        qd_pre=opt("qd_pre", (dof,)),
        qd_min=opt("qd_min", (dof,)),
        qd_max=opt("qd_max", (dof,)),
        tau_pre=opt("tau_pre", (n,)),
        j_imp=opt("j_imp", (3, dof)),
        l_qd=opt("l_qd", (dof, 3)),
    ).validate(n_contacts, path)


def _load_impact(doc, mass, com, path="impact"):
    _check_keys(doc, _IMPACT_FIELDS, _IMPACT_REQUIRED, path)
    position = _array(doc["position"], (3,), f"{path}.position")
    w_inv = None
    if "w_inv" in doc:
        w_inv = _array(doc["w_inv"], (3, 3), f"{path}.w_inv")
    if "crb" in doc:
        crb = doc["crb"]
        _check_keys(crb, {"inertia"}, {"inertia"}, f"{path}.crb")
        inertia = _array(crb["inertia"], (3, 3), f"{path}.crb.inertia")
        derived = crb_inverse_inertia(mass, inertia, position - com)
        if w_inv is None:
            w_inv = derived
        elif np.max(np.abs(w_inv - derived)) > 1e-6:
            raise ValidationError(f"{path}.w_inv",
                                  "disagrees with the map derived from crb.inertia by more than 1e-6")
    if w_inv is None:
        raise SchemaError(f"{path}: one of w_inv or crb is required")
    spec = ImpactSpec(
        position=position,
        rotation=_array(doc["rotation"], (3, 3), f"{path}.rotation"),
        mu_impact=_scalar(doc["mu_impact"], f"{path}.mu_impact"),
        cr_min=_scalar(doc["cr_min"], f"{path}.cr_min"),
        cr_max=_scalar(doc["cr_max"], f"{path}.cr_max"),
        v_ref=_array(doc["v_ref"], (3,), f"{path}.v_ref"),
        w_inv=w_inv,
        e_z=_array(doc.get("e_z", DEFAULT_NORMAL), (3,), f"{path}.e_z"),
        n_mu=int(_scalar(doc.get("n_mu", DEFAULT_N_MU), f"{path}.n_mu")),
        pre_comd=_array(doc.get("pre_comd", (0.0, 0.0)), (2,), f"{path}.pre_comd"),
        delta_t=_scalar(doc.get("delta_t", DEFAULT_DELTA_T), f"{path}.delta_t"),
        torque_ratio=_scalar(doc.get("torque_ratio", DEFAULT_TORQUE_RATIO), f"{path}.torque_ratio"),
    )
    return spec.validate(path)


def load_stance(document):
    """Validate a stance document and return (StanceSpec, ImpactSpec | None).

    Total over the schema: every schema-valid document either loads or raises
    SchemaError / ValidationError with the offending field path.
    """
    _check_keys(document, _STANCE_FIELDS, _STANCE_REQUIRED, "stance")
    raw_contacts = document["contacts"]
    if not isinstance(raw_contacts, list) or not raw_contacts:
        raise SchemaError("contacts: expected a non-empty list")
    contacts = tuple(_load_contact(c, f"contacts[{i}]") for i, c in enumerate(raw_contacts))
    mass = _scalar(document["mass"], "mass")
    com = _array(document["com"], (3,), "com")
    dynamics = None
    if "dynamics" in document and document["dynamics"] is not None:
        dynamics = _load_dynamics(document["dynamics"], len(contacts))
    stance = StanceSpec(
        contacts=contacts,
        mass=mass,
        com=com,
        gravity=_scalar(document.get("gravity", DEFAULT_GRAVITY), "gravity"),
        normal=_array(document.get("normal", DEFAULT_NORMAL), (3,), "normal"),
        dynamics=dynamics,
    ).validate()
    impact = None
    if "impact" in document and document["impact"] is not None:
        impact = _load_impact(document["impact"], mass, com)
    return stance, impact
