"""
Integration tests for the joinmat command line.
"""

import pytest
from click.testing import CliRunner

from src.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


def run(runner, *args):
    return runner.invoke(cli, list(args))


@pytest.mark.integration
class TestMatrixCommands:
    """det, inv, build and psi end to end."""

    def test_max_determinant(self, runner):
        """Test the MAX matrix on a consecutive chain."""
        result = run(runner, 'det', '--kind', 'join', '--chain', '1,2,3', '--f-linear', 't=0')

        assert result.exit_code == 0
        assert "method: upper_closed" in result.stdout
        assert "det: 3" in result.stdout
        assert "1 2 3\n2 2 3\n3 3 3" in result.stdout

    def test_min_inverse_with_check(self, runner):
        result = run(runner, 'inv', '--kind', 'meet', '--chain', '1,2,3', '--f-linear', 't=0', '--check')

        assert result.exit_code == 0
        assert "2 -1 0\n-1 2 -1\n0 -1 1" in result.stdout
        assert result.stdout.rstrip().endswith("verdict: AGREE")

    def test_lcm_determinant_checked(self, runner):
        result = run(runner, 'det', '--divisors', '1,2,3', '--f', 'identity', '--check')

        assert result.exit_code == 0
        assert "method: cauchy_binet" in result.stdout
        assert "det: 12" in result.stdout
        assert "verdict: AGREE" in result.stdout

    def test_forced_method_outside_hypotheses(self, runner):
        """Test that join-closed on a non-closed set is a hypothesis error."""
        result = run(runner, 'det', '--kind', 'join', '--divisors', '1,2,3', '--f', 'identity',
                     '--method', 'join-closed')
        assert result.exit_code == 3

    def test_singular_inverse(self, runner):
        result = run(runner, 'inv', '--chain', '1,2', '--f', 'constant:1')
        assert result.exit_code == 2

    def test_cauchy_binet_cap(self, runner):
        args = ['det', '--kind', 'meet', '--divisors', '1,2,3,4,5,6', '--cap', '10']
        assert run(runner, *args).exit_code == 4

        result = run(runner, *args, '--force')
        assert result.exit_code == 0
        assert "det: 32" in result.stdout

    def test_build_factors(self, runner, diamond_file, diamond_values_file):
        result = run(runner, 'build', '--poset', str(diamond_file), '--set', 'a,b',
                     '--f', str(diamond_values_file), '--factors')

        assert result.exit_code == 0
        assert "X: a,b" in result.stdout
        assert "is_join_closed: false" in result.stdout
        assert "matrix:\n2 4\n4 3" in result.stdout
        assert "basis: a,b,top" in result.stdout
        assert "Lambda:" in result.stdout

    def test_values_only_on_the_set(self, runner, temp_dir):
        """Test a join-closed set whose function file skips the element between its members."""
        poset = temp_dir / 'chain.poset'
        poset.write_text("elem 1\nelem 2\nelem 3\nrel 1 2\nrel 2 3\n", encoding='utf-8')
        values = temp_dir / 'fv.txt'
        values.write_text("1 1\n3 5\n", encoding='utf-8')

        result = run(runner, 'det', '--poset', str(poset), '--set', '1,3', '--f', str(values), '--check')

        assert result.exit_code == 0
        assert "method: join_closed" in result.stdout
        assert "det: -20" in result.stdout
        assert "verdict: AGREE" in result.stdout

    def test_psi_all_methods(self, runner):
        result = run(runner, 'psi', '--divisors', '1,2,3,6')

        assert result.exit_code == 0
        assert "basis: 1,2,3,6" in result.stdout
        assert "psi[dirichlet]: 1=2 2=-4 3=-3 6=6" in result.stdout
        assert "verdict: AGREE" in result.stdout

    def test_psi_single_method(self, runner):
        result = run(runner, 'psi', '--divisors', '1,6', '--method', 'recursive')

        assert result.exit_code == 0
        assert "psi[recursive]: 1=-5 6=6" in result.stdout
        assert "verdict" not in result.stdout


@pytest.mark.integration
class TestInputErrors:
    """Malformed input exits with code 1."""

    def test_bad_kind(self, runner):
        assert run(runner, 'det', '--kind', 'sideways', '--chain', '1,2').exit_code == 1

    def test_float_shift(self, runner):
        assert run(runner, 'det', '--chain', '1,2', '--f-linear', 't=0.5').exit_code == 1

    def test_two_host_sources(self, runner):
        assert run(runner, 'det', '--chain', '1,2', '--divisors', '1,2').exit_code == 1

    def test_missing_poset_file(self, runner, temp_dir):
        result = run(runner, 'det', '--poset', str(temp_dir / 'absent.poset'), '--set', 'a')
        assert result.exit_code == 1

    @pytest.mark.parametrize("source", [["--chain", "1,2,3"], ["--divisors", "1,2"], ["--start", "1", "--n", "2"]])
    def test_set_needs_poset(self, runner, source):
        result = run(runner, 'det', *source, '--set', '2,3')
        assert result.exit_code == 1


@pytest.mark.integration
class TestExamples:
    """The example command."""

    def test_max_consecutive(self, runner):
        result = run(runner, 'example', '2', '--chain', '4,5,6', '--t', '0')

        assert result.exit_code == 0
        assert "engine: 6" in result.stdout
        assert "verdict: AGREE" in result.stdout

    def test_min_consecutive(self, runner):
        result = run(runner, 'example', '6', '--start', '1', '--n', '3', '--t', '0')

        assert result.exit_code == 0
        assert "closed form: 1" in result.stdout

    def test_min_with_zero_between_members(self, runner):
        result = run(runner, 'example', '5', '--chain', '1,3', '--t', '-2')

        assert result.exit_code == 0
        assert "engine: -2" in result.stdout
        assert "verdict: AGREE" in result.stdout

    def test_hypothesis_violated(self, runner):
        result = run(runner, 'example', '3', '--chain', '1,2,3', '--t=-3')
        assert result.exit_code == 3

    @pytest.mark.slow
    def test_smith(self, runner):
        result = run(runner, 'example', 'smith', '--n', '6')

        assert result.exit_code == 0
        assert "closed form: 32" in result.stdout
        assert "verdict: AGREE" in result.stdout


@pytest.mark.integration
class TestVerify:
    """The randomized campaign from the command line."""

    def test_deterministic_output(self, runner):
        first = run(runner, 'verify', '--trials', '5', '--seed', '7')
        second = run(runner, 'verify', '--trials', '5', '--seed', '7')

        assert first.exit_code == 0
        assert first.stdout == second.stdout
        assert first.stdout.rstrip().endswith("5/5 pass")

    def test_config_file(self, runner, temp_dir):
        config = temp_dir / 'config.yaml'
        config.write_text("verify:\n  trials: 3\n  seed: 11\n", encoding='utf-8')

        result = run(runner, '--config', str(config), 'verify')

        assert result.exit_code == 0
        assert "verify: seed 11, 3 trials" in result.stdout
        assert result.stdout.rstrip().endswith("3/3 pass")
