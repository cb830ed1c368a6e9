import pytest

from robustprod.enums.enums import DecontaminationScheme, Estimator, Measure, Scale, SimVariant
from robustprod.schemas.estimation import ModelSpec
from robustprod.schemas.pipeline import PipelineConfig
from robustprod.schemas.simulation import ProxyPanelConfig, SimConfig
from robustprod.services.pipeline import prepare, resolve_spec, run_pipeline
from robustprod.services.simgen import generate, generate_proxy_panel
from tests.factories import make_panel


SPEC = ModelSpec(regressors=[Measure.labour, Measure.capital], estimator=Estimator.within)


@pytest.fixture(scope="module")
def sample1():
    return generate(SimConfig(seed=7), SimVariant.sample1)


@pytest.fixture(scope="module")
def report(sample1):
    data, _ = sample1
    return run_pipeline(data, PipelineConfig(min_run=1, spec=SPEC, seed=7))


def test_every_scheme_is_estimated(report):
    assert [s.scheme for s in report.samples] == list(DecontaminationScheme)
    assert report.sample(DecontaminationScheme.no_out).n_records == 840
    assert report.stage_counts["no-out:estimated"] == 840


def test_stage_counts_add_up(report):
    counts = report.stage_counts

    assert counts["cloud"] == 840
    assert counts["non_outliers"] + counts["outliers"] == 840
    assert sum(report.classification.values()) == counts["outliers"]
    assert report.decontamination.core >= report.decontamination.breakdown_bound
    assert report.trim.kept + report.trim.trimmed == 840


def test_scheme_selections(report):
    small_large = report.sample(DecontaminationScheme.small_large)
    full_out = report.sample(DecontaminationScheme.full_out)
    dropped = report.classification["small"] + report.classification["large"]

    assert small_large.selected == 840 - dropped
    assert full_out.selected == report.stage_counts["non_outliers"]
    assert report.sample(DecontaminationScheme.uni_out).selected == report.trim.kept


def test_full_out_removes_planted_outliers(sample1, report):
    _, truth = sample1
    kept = set(report.sample(DecontaminationScheme.full_out).record_ids)

    assert len(kept & set(truth.outlier_ids)) < truth.n_outliers


def test_dropping_neither_matches_full_out(sample1):
    data, _ = sample1

    report = run_pipeline(
        data,
        PipelineConfig(
            min_run=1,
            spec=SPEC,
            keep_neither=False,
            schemes=[DecontaminationScheme.full_out, DecontaminationScheme.small_large],
        ),
    )

    full_out = report.sample(DecontaminationScheme.full_out)
    small_large = report.sample(DecontaminationScheme.small_large)
    assert sorted(full_out.record_ids) == sorted(small_large.record_ids)
    assert full_out.estimation.coefficients == small_large.estimation.coefficients


def test_report_is_reproducible(sample1, report):
    data, _ = sample1

    again = run_pipeline(data, PipelineConfig(min_run=1, spec=SPEC, seed=7))

    assert again.model_dump_json() == report.model_dump_json()
    assert report.provenance["seed"] == 7
    assert "numpy" in report.provenance["versions"]


def test_record_ids_stay_out_of_the_report(report):
    dumped = report.model_dump()

    assert "record_ids" not in dumped["samples"][0]
    assert "residuals" not in dumped["samples"][0]["estimation"]


def test_resolve_spec_defaults():
    proxy_data, _ = generate_proxy_panel(ProxyPanelConfig(seed=1, n_farms=10))
    sim_data, _ = generate(SimConfig(seed=1))

    assert resolve_spec(proxy_data, None).estimator == Estimator.wlp
    assert resolve_spec(proxy_data, None).regressors == [
        Measure.land, Measure.labour, Measure.capital, Measure.materials,
    ]
    assert resolve_spec(sim_data, None).estimator == Estimator.within
    assert resolve_spec(sim_data, SPEC) is SPEC


def test_prepare_logs_raw_panels():
    raw = make_panel(
        [{"farm_id": "a", "year": 2001, "output": 1.0, "capital": 1.0}], scale=Scale.raw
    )

    logged = prepare(raw)

    assert logged.scale == Scale.log
    assert prepare(logged) is logged


def test_single_scheme(sample1):
    data, _ = sample1

    report = run_pipeline(
        data, PipelineConfig(min_run=4, spec=SPEC, schemes=[DecontaminationScheme.no_out])
    )

    assert len(report.samples) == 1
    assert report.sample(DecontaminationScheme.no_out).n_records == 840
