import logging

import numpy as np

from bofdb.encode.histogram import encode_histogram, normalize_l1
from bofdb.errors import ModelNotLoaded
from bofdb.features.image import decode_image
from bofdb.helpers import Stopwatch
from bofdb.store.rows import StatsRecord
from bofdb.svm.svm_model import train_one_vs_rest
from bofdb.vocab.kmeans import kmeans_train, subsample

logger = logging.getLogger(__name__)


def learn(store, spec):
    """Learning mode: extract, cluster, encode and train

    Every training image is stored as a blob with its class, its
    descriptor set and its histogram; the dictionary, with the extraction
    parameters, and the SVM model are stored so that load_trained finds
    them. Nothing is written before the classifiers are trained, so a
    failure leaves the store unchanged.

    Args:
        store (bofdb.Store): the open store
        spec (bofdb.LearnSpec): the training images and parameters

    Raises:
        MalformedImage: if a training file can't be decoded
        TooFewDistinctPoints: if the images yield fewer than k distinct
            descriptors
        SingleClassData: if the images have a single class

    Returns:
        tuple: (bofdb.Dictionary, bofdb.SvmModel)
    """
    extractor = spec.extractor()
    extracted = []
    for image in spec.images:
        watch = Stopwatch()
        with watch.stage("extract"):
            descriptors = extractor.extract(decode_image(image.data))
        extracted.append((image, descriptors, watch))
    logger.info("extracted descriptors of %d training images", len(extracted))

    data = np.concatenate([d.vectors for _, d, _ in extracted]).astype(np.float64)
    if spec.subsample is not None:
        data = subsample(data, spec.subsample, spec.seed)
    dictionary = kmeans_train(
        data, spec.words_count, seed=spec.seed, restarts=spec.restarts, max_iter=spec.max_iter
    )
    dictionary.extractor = extractor
    logger.info("learned a %d-word dictionary from %d descriptors", dictionary.words_count, len(data))

    histograms, features = [], []
    for _, descriptors, watch in extracted:
        with watch.stage("encode"):
            histogram = encode_histogram(dictionary, descriptors)
        histograms.append(histogram)
        features.append(normalize_l1(histogram))
    model = train_one_vs_rest(
        np.array(features), [image.class_label for image, _, _ in extracted], spec.svm, seed=spec.seed
    )

    model.dictionary_id = store.put_dictionary(dictionary)
    for (image, descriptors, watch), histogram in zip(extracted, histograms):
        file_id = store.put_blob(image.data, image.name)
        descriptors.image_id = file_id
        store.put_image(file_id, image.class_label, "train")
        store.put_sifts(descriptors)
        store.insert_descriptor_row(histogram, file_id, model.dictionary_id)
        for stage in ("extract", "encode"):
            store.record_stat(StatsRecord(file_id, stage, watch.timings[stage]))
    store.put_svm_model(model)
    return dictionary, model


def load_trained(store):
    """Latest SVM model stored by learn and the dictionary it was trained
    against

    Raises:
        ModelNotLoaded: if the store holds no model

    Returns:
        tuple: (bofdb.Dictionary, bofdb.SvmModel)
    """
    model_id = store.latest_id("svm_configs")
    if model_id is None:
        raise ModelNotLoaded("the store holds no trained model, run learn first")
    model = store.get_svm_model(model_id)
    if model.dictionary_id is None:
        raise ModelNotLoaded("model {} has no dictionary".format(model_id))
    dictionary = store.get_dictionary(model.dictionary_id)
    logger.info("loaded model %d (%d classes)", model_id, len(model.class_labels))
    return dictionary, model
