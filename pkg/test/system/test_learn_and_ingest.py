import numpy as np
import pytest

from bofdb import (
    LearnSpec,
    MalformedImage,
    ModelNotLoaded,
    SingleClassData,
    Store,
    TooFewDistinctPoints,
    TrainingImage,
    classify_bytes,
    encode_svm_model_udt,
    ingest_and_classify,
    learn,
    load_trained,
    synthetic_images,
)
from bofdb.store.rows import STAGES, TABLES


@pytest.fixture(scope="module")
def corpus():
    return synthetic_images(classes=3, per_class=12, seed=0)


@pytest.fixture(scope="module")
def trained(corpus, tmp_path_factory):
    training = [image for i, image in enumerate(corpus) if i % 12 < 10]
    store = Store.open(tmp_path_factory.mktemp("learned"))
    dictionary, model = learn(store, LearnSpec(training, words_count=16, seed=1))
    yield store, dictionary, model, training
    store.close()


def test_everything_persisted(trained):
    store, dictionary, model, training = trained
    n = len(training)

    assert store.count("images_ft") == n
    assert store.count("images") == n
    assert store.count("sifts") == n
    assert store.count("descriptors") == n
    assert store.count("dictionaries") == 1
    assert store.count("svm_configs") == 1
    assert store.verify_index()
    assert load_trained(store)[0] == dictionary


def test_training_accuracy(trained):
    store, dictionary, model, training = trained
    predicted = [classify_bytes(image.data, dictionary, model) for image in training]

    assert predicted == [image.class_label for image in training]


def test_held_out_images(trained, corpus):
    store, dictionary, model, _ = trained
    held_out = [image for i, image in enumerate(corpus) if i % 12 >= 10]
    correct = sum(classify_bytes(image.data, dictionary, model) == image.class_label for image in held_out)

    assert correct >= len(held_out) - 1


def test_learn_is_deterministic(tmp_path):
    images = synthetic_images(classes=2, per_class=5, seed=2)
    results = []
    for name in ("a", "b"):
        with Store.open(tmp_path / name) as store:
            results.append(learn(store, LearnSpec(images, words_count=8, seed=4)))
    (d1, m1), (d2, m2) = results
    points = np.random.default_rng(0).uniform(size=(20, 8))

    assert d1.values.tobytes() == d2.values.tobytes()
    assert encode_svm_model_udt(m1) == encode_svm_model_udt(m2)
    for x in points:
        assert np.array_equal(m1.decision_values(x), m2.decision_values(x))


def test_single_class_spec():
    images = synthetic_images(classes=2, per_class=3)[:3]

    with pytest.raises(SingleClassData):
        LearnSpec(images, words_count=4)


def test_learn_rejects_bad_image(tmp_path):
    images = synthetic_images(classes=2, per_class=2) + [TrainingImage(b"GIF89a", "dots")]

    with Store.open(tmp_path) as store:
        with pytest.raises(MalformedImage):
            learn(store, LearnSpec(images, words_count=4))
        assert all(store.count(table) == 0 for table in TABLES)


def test_too_few_descriptors_leaves_store_empty(tmp_path):
    # 4 images of 49 keypoints each can't fill 500 words
    images = synthetic_images(classes=2, per_class=2)

    with Store.open(tmp_path) as store:
        with pytest.raises(TooFewDistinctPoints):
            learn(store, LearnSpec(images, words_count=500))
        assert all(store.count(table) == 0 for table in TABLES)
        with pytest.raises(ModelNotLoaded):
            load_trained(store)


def test_learned_extractor_is_loaded(tmp_path):
    images = synthetic_images(classes=2, per_class=3, size=32)

    with Store.open(tmp_path) as store:
        learn(store, LearnSpec(images, words_count=6, grid_step=4, patch_size=8))
        loaded, model = load_trained(store)
        report = ingest_and_classify(store, images[1].data, loaded, model)

    assert (loaded.extractor.grid_step, loaded.extractor.patch_size) == (4, 8)
    assert report.duplicate_of == [2]


def test_load_without_model(tmp_path):
    with Store.open(tmp_path) as store:
        with pytest.raises(ModelNotLoaded):
            load_trained(store)


class TestIngest:
    def test_report(self, trained, corpus):
        store, dictionary, model, _ = trained
        stats_before = store.count("stats")
        image = corpus[11]
        report = ingest_and_classify(store, image.data, dictionary, model, name=image.name)

        assert report.image_id == report.file_id
        assert store.get_blob(report.file_id) == image.data
        assert report.predicted_class == image.class_label
        assert [t.stage for t in report.timings] == list(STAGES)
        assert all(t.elapsed_us > 0 for t in report.timings)
        parts = sum(report.timing(stage) for stage in STAGES[:-1])
        assert report.timing("total") >= parts - 1.0
        assert store.count("stats") == stats_before + len(STAGES)
        assert store.fetch("images", store.latest_id("images")).source == "predicted"

    def test_reingest_finds_duplicate(self, trained):
        store, dictionary, model, training = trained
        report = ingest_and_classify(store, training[3].data, dictionary, model)

        assert 4 in report.duplicate_of
        assert report.file_id not in report.duplicate_of

    def test_malformed_image(self, trained):
        store, dictionary, model, _ = trained
        blobs = store.count("images_ft")

        with pytest.raises(MalformedImage):
            ingest_and_classify(store, b"not an image", dictionary, model)
        assert store.count("images_ft") == blobs

    def test_model_not_loaded(self, trained, corpus):
        store, dictionary = trained[:2]

        with pytest.raises(ModelNotLoaded):
            ingest_and_classify(store, corpus[0].data, dictionary, None)
