from contextlib import nullcontext

from bofdb.encode.histogram import encode_histogram, normalize_l1
from bofdb.errors import DimensionMismatch, ModelNotLoaded
from bofdb.features.extractor import DescriptorExtractor
from bofdb.features.image import decode_image
from bofdb.svm.svm_model import predict_class


def extractor_for(dictionary, extractor=None):
    """The extractor to describe images with under a dictionary

    An explicit extractor wins, then the one the dictionary was learned
    with, then DescriptorExtractor() defaults.
    """
    if extractor is not None:
        return extractor
    if dictionary is not None and dictionary.extractor is not None:
        return dictionary.extractor
    return DescriptorExtractor()


def describe_bytes(data, dictionary, extractor=None, image_id=None, watch=None):
    """decode -> extract -> encode

    Args:
        data (bytes): a PGM/PPM file
        dictionary (bofdb.Dictionary): the dictionary
        extractor (bofdb.DescriptorExtractor, optional): Defaults to
            dictionary.extractor, see extractor_for.
        image_id (int, optional): attached to the results. Defaults to
            None.
        watch (bofdb.helpers.Stopwatch, optional): if given, the "extract"
            and "encode" stages are timed on it. Defaults to None.

    Returns:
        tuple: (bofdb.DescriptorSet, bofdb.BofHistogram)
    """
    extractor = extractor_for(dictionary, extractor)
    with _stage(watch, "extract"):
        descriptors = extractor.extract(decode_image(data), image_id=image_id)
    with _stage(watch, "encode"):
        histogram = encode_histogram(dictionary, descriptors)
    return descriptors, histogram


def predict_histogram(histogram, dictionary, model):
    """Class of an encoded image

    Raises:
        DimensionMismatch: if the model wasn't trained on histograms of
            this dictionary

    Returns:
        the predicted class label
    """
    if model.dim != dictionary.words_count:
        raise DimensionMismatch(
            "model expects {} words, dictionary has {}".format(model.dim, dictionary.words_count)
        )
    return predict_class(model, normalize_l1(histogram))


def classify_bytes(data, dictionary, model, extractor=None):
    """decode -> extract -> encode -> predict

    Args:
        data (bytes): a PGM/PPM file
        dictionary (bofdb.Dictionary): the dictionary
        model (bofdb.SvmModel): the classifier
        extractor (bofdb.DescriptorExtractor, optional): Defaults to
            dictionary.extractor, see extractor_for.

    Raises:
        ModelNotLoaded: if dictionary or model is None

    Returns:
        the predicted class label
    """
    if dictionary is None or model is None:
        raise ModelNotLoaded("no trained dictionary and model are loaded")
    _, histogram = describe_bytes(data, dictionary, extractor)
    return predict_histogram(histogram, dictionary, model)


def _stage(watch, name):
    return nullcontext() if watch is None else watch.stage(name)
