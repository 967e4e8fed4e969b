import numpy as np
import pytest

ACCEPTANCE_RESULTS = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.fspath.basename == "test_acceptance.py":
        label = (item.function.__doc__ or item.name).strip().splitlines()[0]
        ACCEPTANCE_RESULTS.append((label, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for label, ok in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}")


def rot_x(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0, 0], [0, c, -s], [0, s, c]])


def rot_y(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0, s], [0, 1.0, 0], [-s, 0, c]])


def rot_z(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1.0]])


def contact_doc(position, rotation=None, half_x=0.11, half_y=0.065, mu=0.7,
                tau_z=50.0):
    if rotation is None:
        rotation = np.eye(3)
    return {
        "rotation": np.asarray(rotation).tolist(),
        "position": list(map(float, position)),
        "half_x": half_x,
        "half_y": half_y,
        "mu": mu,
        "tau_z_min": -tau_z,
        "tau_z_max": tau_z,
    }


def two_feet_doc(mu=0.7, com=(0.0, 0.0, 0.78), mass=39.0):
    """Flat double-support stance, feet either side of the CoM."""
    return {
        "contacts": [
            contact_doc((0.0, 0.1, 0.0), mu=mu),
            contact_doc((0.0, -0.1, 0.0), mu=mu),
        ],
        "mass": mass,
        "com": list(map(float, com)),
    }


def ramp_doc(ramp_mu=0.7, flat_mu=0.7):
    """One foot flat, the other on a 30-degree ramp."""
    ramp_rot = rot_y(np.deg2rad(-30.0))
    return {
        "contacts": [
            contact_doc((0.0, 0.12, 0.0), mu=flat_mu),
            contact_doc((0.18, -0.12, 0.10), rotation=ramp_rot, mu=ramp_mu),
        ],
        "mass": 39.0,
        "com": [0.0, 0.0, 0.78],
    }


def single_rect_doc(mu=2.0, half_x=0.1, half_y=0.1, com_z=0.8):
    """Single rectangular contact centered under the CoM, generous limits."""
    return {
        "contacts": [contact_doc((0.0, 0.0, 0.0), half_x=half_x, half_y=half_y,
                                 mu=mu, tau_z=1e4)],
        "mass": 10.0,
        "com": [0.0, 0.0, com_z],
    }


def wall_impact_doc(mu_impact=0.24, cr=(0.0, 0.2), v_ref=(3.0, 0.0, 0.0),
                    n_mu=16, pre_comd=(0.0, 0.0)):
    """Right-palm push against a wall at +x; contact-frame z is the wall's
    outward normal (-x in the inertial frame)."""
    rotation = [[0.0, 0.0, -1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]]
    return {
        "position": [0.45, -0.25, 0.9],
        "rotation": rotation,
        "mu_impact": mu_impact,
        "cr_min": cr[0],
        "cr_max": cr[1],
        "n_mu": n_mu,
        "v_ref": list(map(float, v_ref)),
        "pre_comd": list(map(float, pre_comd)),
        "crb": {"inertia": [[4.0, 0.0, 0.0], [0.0, 4.5, 0.0], [0.0, 0.0, 2.0]]},
    }


@pytest.fixture
def two_feet():
    from balance_kit.stance import load_stance

    stance, _ = load_stance(two_feet_doc())
    return stance


@pytest.fixture
def ramp_stance():
    from balance_kit.stance import load_stance

    stance, _ = load_stance(ramp_doc())
    return stance


@pytest.fixture
def single_rect():
    from balance_kit.stance import load_stance

    stance, _ = load_stance(single_rect_doc())
    return stance
