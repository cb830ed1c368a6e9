from robustprod.enums.enums import DecontaminationScheme, SimVariant
from robustprod.schemas.montecarlo import StudyConfig
from robustprod.schemas.simulation import SimConfig
from robustprod.services.montecarlo import replication_seeds, simulation_study


SMALL = SimConfig(n_clean_farms=30, n_outlier_farms=6, periods=5)


def test_seeds_depend_only_on_master_seed():
    assert replication_seeds(5, 3) == replication_seeds(5, 3)
    assert replication_seeds(5, 3) == replication_seeds(5, 4)[:3]
    assert replication_seeds(5, 3) != replication_seeds(6, 3)


def test_study_cells_and_rows():
    config = StudyConfig(replications=2, master_seed=3, variants=[SimVariant.sample1], sim=SMALL)

    summary = simulation_study(config)

    assert len(summary.rows) == 2 * 3
    assert [(c.variant, c.scheme) for c in summary.cells] == [
        (SimVariant.sample1, scheme) for scheme in config.schemes
    ]
    no_out = summary.cell(SimVariant.sample1, DecontaminationScheme.no_out)
    assert no_out.replications == 2
    assert no_out.n_mean == 36 * 5
    assert no_out.planted_outliers_kept_mean == 30
    assert 0.0 <= no_out.share_labour_below_030 <= 1.0


def test_study_is_reproducible():
    config = StudyConfig(replications=2, master_seed=9, variants=[SimVariant.raw], sim=SMALL)

    first = simulation_study(config)
    second = simulation_study(config)

    assert [r.labour for r in first.rows] == [r.labour for r in second.rows]
    assert "rows" not in first.model_dump()


def test_study_keeps_four_year_runs_by_default():
    assert StudyConfig().min_run == 4
