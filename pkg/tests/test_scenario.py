import textwrap
from fractions import Fraction
from pathlib import Path

import pytest

from deformation import DeformedModel
from errors import ScenarioError
from models import TorusDiracModel
from profiles import Profile
from scenario import Scenario, load_scenario, override, parse_scenario
from sectors import Character
from sphere import SphereModel


def scenario_text(body):
    return textwrap.dedent(body).lstrip()


def test_minimal_sphere_scenario():
    scenario = parse_scenario(
        scenario_text(
            """
            model = "sphere"
            k_lift = 0
            N = 256
            K = 8
            margin = 0.05
            checks = ["full"]
            ell_range = [-2, 2]
            """,
        ),
    )
    assert scenario.model == "sphere"
    assert scenario.margin == 0.05
    assert list(scenario.ells) == [-2, -1, 0, 1, 2]
    assert scenario.checks == ["full"]
    assert scenario.zeta(-1) == Character.of(-1)
    assert not scenario.deformed


def test_defaults():
    scenario = parse_scenario("")
    assert scenario == Scenario()
    assert scenario.output == Path("out")


def test_single_ell():
    assert list(parse_scenario("ell_range = 1\n").ells) == [1]


def test_skew_theta_is_accepted():
    scenario = parse_scenario(
        scenario_text(
            """
            model = "warped_torus"
            n = 2
            theta_matrix = [[0, 0.5], [-0.5, 0]]
            """,
        ),
    )
    assert scenario.deformed
    assert scenario.nc_torus().theta[0][1] == Fraction(1, 2)
    assert scenario.zeta(1) == Character.of(1, 0)


def test_fraction_strings_in_theta():
    scenario = parse_scenario('model = "nc_torus"\nn = 2\ntheta_matrix = [[0, "1/3"], ["-1/3", 0]]\n')
    assert scenario.theta_matrix == [[Fraction(0), Fraction(1, 3)], [Fraction(-1, 3), Fraction(0)]]


def test_symmetric_theta_is_rejected_with_its_line():
    text = scenario_text(
        """
        model = "warped_torus"
        n = 2
        theta_matrix = [[0, 1], [1, 0]]
        """,
    )
    with pytest.raises(ScenarioError, match="skew-symmetry violated") as info:
        parse_scenario(text)
    assert info.value.line == 3
    assert str(info.value).startswith("line 3: ")


@pytest.mark.parametrize(
    ("text", "message", "line"),
    [
        ('model = "klein_bottle"\n', "unknown model", 1),
        ('model = "torus"\nK = 1\n', "K must be at least 2", 2),
        ("N = 8\n", "N must be at least 16", 1),
        ("checks = []\n", "non-empty", 1),
        ('checks = ["ssa", "cond3"]\n', "unknown checks", 1),
        ("K = 4\nfoo = 1\n", "unknown key 'foo'", 2),
        ('N = "64"\n', "N must be an integer", 1),
        ("poles = 1\n", "poles must be true or false", 1),
        ("refinements = 0\n", "refinements must be at least 1", 1),
        ("K = 3\nell_range = [-4, 0]\n", "leaves the window", 2),
        ("ell_range = [2, 1]\n", "increasing pair", 1),
        ('profile = "sawtooth"\n', "unknown profile", 1),
        ('profile = "constant"\nprofile_amplitude = 2.0\n', "takes no parameter", 2),
        ('model = "nc_torus"\nn = 2\n', "needs a theta_matrix", 1),
        ("theta_matrix = [[0, 0.5], [-0.5, 0]]\n", "must be 1x1", 1),
        ('theta_matrix = [["a"]]\n', "fractions", 1),
        ("f_samples = []\n", "f_samples", 1),
    ],
)
def test_rejections(text, message, line):
    with pytest.raises(ScenarioError, match=message) as info:
        parse_scenario(text)
    assert info.value.line == line


def test_invalid_toml_reports_line():
    with pytest.raises(ScenarioError, match="invalid TOML") as info:
        parse_scenario('model = "torus"\nn = \n')
    assert info.value.line == 2


def test_profile_parameters():
    scenario = parse_scenario('profile = "gaussian-bump"\nprofile_width = 0.2\nprofile_center = 0.25\n')
    assert scenario.profile_spec == Profile.named("gaussian-bump", width=0.2, center=0.25)


def test_profile_samples_take_precedence():
    scenario = parse_scenario("f_samples = [1, 2, 3, 2]\n")
    assert scenario.profile_spec == Profile.from_samples([1.0, 2.0, 3.0, 2.0])


class TestBuildModel:
    def test_torus(self):
        model = parse_scenario('model = "torus"\nn = 2\nK = 3\n').build_model()
        assert isinstance(model, TorusDiracModel)
        assert model.window.K == 3

    def test_sphere_with_poles(self):
        model = parse_scenario('model = "sphere"\nN = 64\nK = 3\nmargin = 0.1\npoles = true\n').build_model()
        assert isinstance(model, SphereModel)
        assert not model.punctured

    def test_deformed_warped_torus(self):
        text = 'model = "warped_torus"\nn = 2\nN = 16\nK = 2\ntheta_matrix = [[0, "1/3"], ["-1/3", 0]]\n'
        model = parse_scenario(text).build_model()
        assert isinstance(model, DeformedModel)
        assert model.theta[0][1] == Fraction(1, 3)

    def test_zero_theta_is_not_deformed(self):
        text = 'model = "warped_torus"\nn = 2\nN = 16\nK = 2\ntheta_matrix = [[0, 0], [0, 0]]\n'
        assert not isinstance(parse_scenario(text).build_model(), DeformedModel)

    def test_nc_torus_is_deformed(self):
        text = 'model = "nc_torus"\nn = 2\nK = 2\ntheta_matrix = [[0, 0.25], [-0.25, 0]]\n'
        model = parse_scenario(text).build_model()
        assert isinstance(model, DeformedModel)
        assert model.base.name == "torus"


class TestOverride:
    def test_flags_replace_fields(self, tmp_path):
        scenario = override(parse_scenario("K = 8\n"), output=tmp_path, refinements=2, K=4)
        assert (scenario.output, scenario.refinements, scenario.K) == (tmp_path, 2, 4)

    def test_unset_flags_are_ignored(self):
        scenario = parse_scenario("K = 5\n")
        assert override(scenario, output=None, refinements=None, K=None) is scenario

    def test_overrides_are_validated(self):
        with pytest.raises(ScenarioError, match="K must be at least 2") as info:
            override(parse_scenario(""), K=1)
        assert info.value.line is None


def test_load_scenario(tmp_path):
    path = tmp_path / "scenario.toml"
    path.write_text('model = "torus"\nn = 2\n', encoding="utf-8")
    assert load_scenario(path).model == "torus"
    with pytest.raises(ScenarioError, match="cannot read scenario"):
        load_scenario(tmp_path / "missing.toml")
