import numpy as np
import pytest

from bofdb import HashIndex, LearnSpec, Store, ingest_and_classify, learn, load_trained, synthetic_images
from bofdb.store.store import CATALOG_FILE, INDEX_FILE


def _learned_store(path, per_class):
    images = synthetic_images(classes=3, per_class=per_class, seed=0, size=32)
    store = Store.open(path)
    spec = LearnSpec(images, words_count=12, grid_step=4)
    dictionary, model = learn(store, spec)
    return store, images, spec.extractor(), dictionary, model


@pytest.mark.slow
def test_reopen_after_many_ingests(tmp_path):
    store, images, extractor, dictionary, model = _learned_store(tmp_path, per_class=6)
    with store:
        # 482 fresh images and the 18 training images: 500 ingests
        fresh = synthetic_images(classes=3, per_class=161, seed=9, size=32)[:482]
        for image in fresh + images:
            ingest_and_classify(store, image.data, dictionary, model, extractor)
        assert store.count("descriptors") == len(images) + 500
        live_index = store.index
        rows = store.scan("descriptors")
    catalog = (tmp_path / CATALOG_FILE).read_bytes()
    points = np.random.default_rng(0).uniform(size=(100, 12))

    with Store.open(tmp_path) as store:
        assert (tmp_path / CATALOG_FILE).read_bytes() == catalog
        assert store.scan("descriptors") == rows
        assert store.index == live_index
        assert store.index == HashIndex.build(dict(rows))
        reloaded_dictionary, reloaded = load_trained(store)
        assert reloaded_dictionary == dictionary
        for x in points:
            assert np.array_equal(reloaded.decision_values(x), model.decision_values(x))
        # every training image was ingested once more
        for record_id, row in rows[:18]:
            assert len(store.lookup_by_hash(row.comparative_descriptor)) >= 2


def test_index_rebuilt_after_deletion(tmp_path):
    store, images, extractor, dictionary, model = _learned_store(tmp_path, per_class=2)
    with store:
        for image in images[:3]:
            ingest_and_classify(store, image.data, dictionary, model, extractor)
        incremental = store.index
        first = store.fetch("descriptors", 1).comparative_descriptor
    (tmp_path / INDEX_FILE).unlink()

    with Store.open(tmp_path) as store:
        assert store.index == incremental
        assert store.lookup_by_hash(first) == {1, 7}


def test_model_survives_reopen(tmp_path):
    store, images, extractor, dictionary, model = _learned_store(tmp_path, per_class=2)
    store.close()

    with Store.open(tmp_path) as store:
        reloaded_dictionary, reloaded = load_trained(store)
        assert reloaded.class_labels == model.class_labels
        assert reloaded_dictionary.dictionary_id == dictionary.dictionary_id
        # no extractor given: the one stored with the dictionary is used
        report = ingest_and_classify(store, images[0].data, reloaded_dictionary, reloaded)
        assert reloaded_dictionary.extractor.grid_step == extractor.grid_step
        assert report.duplicate_of == [1]
