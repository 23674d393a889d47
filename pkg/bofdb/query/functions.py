"""Functions callable from queries.

Every function receives the QueryContext and the literal argument values
and returns either a class label (GetClassOfImage) or a sorted list of
image ids (FindDuplicates, FindSimilar).
"""

from dataclasses import dataclass

from bofdb.encode.histogram import hash_descriptor, histogram_distance
from bofdb.errors import ModelNotLoaded, TypeMismatch, UnknownFileId
from bofdb.features.extractor import DescriptorExtractor
from bofdb.pipeline.classify import classify_bytes, describe_bytes, extractor_for
from bofdb.query.schema import FUNCTIONS


@dataclass
class QueryContext:
    """What query functions may use

    Args:
        store (bofdb.Store): the open store
        dictionary (bofdb.Dictionary, optional): the loaded dictionary
        model (bofdb.SvmModel, optional): the loaded classifier
        extractor (bofdb.DescriptorExtractor, optional): defaults to the
            extractor the dictionary was learned with
    """

    store: object
    dictionary: object = None
    model: object = None
    extractor: DescriptorExtractor = None

    def __post_init__(self):
        self.extractor = extractor_for(self.dictionary, self.extractor)


def _require_file(context, file_id):
    if not context.store.has_file(file_id):
        raise UnknownFileId("no stored file has id {}".format(file_id))


def stored_histogram(context, file_id):
    """Histogram of a file under the loaded dictionary

    The stored descriptors row is used when the file was ingested under
    this dictionary; otherwise the histogram is computed from the blob.

    Raises:
        UnknownFileId: if file_id isn't a stored file
        ModelNotLoaded: if no dictionary is loaded

    Returns:
        bofdb.BofHistogram: the histogram
    """
    _require_file(context, file_id)
    if context.dictionary is None:
        raise ModelNotLoaded("no dictionary is loaded")
    dictionary_id = context.dictionary.dictionary_id
    for record_id, row in context.store.scan("descriptors"):
        if row.image_id == file_id and row.dictionary_id == dictionary_id:
            return context.store.get_histogram(record_id)
    data = context.store.get_blob(file_id)
    return describe_bytes(data, context.dictionary, context.extractor, image_id=file_id)[1]


def get_class_of_image(context, file_id):
    """Class predicted for a stored image file"""
    _require_file(context, file_id)
    if context.dictionary is None or context.model is None:
        raise ModelNotLoaded("no trained dictionary and model are loaded")
    data = context.store.get_blob(file_id)
    return classify_bytes(data, context.dictionary, context.model, context.extractor)


def find_duplicates(context, file_id):
    """Images whose histogram has the same comparative descriptor as
    file_id's, found through the hash index"""
    digest = hash_descriptor(stored_histogram(context, file_id))
    dictionary_id = context.dictionary.dictionary_id
    images = set()
    for record_id in sorted(context.store.lookup_by_hash(digest)):
        row = context.store.fetch("descriptors", record_id)
        if row.dictionary_id == dictionary_id and row.image_id != file_id:
            images.add(row.image_id)
    return sorted(images)


def find_similar(context, file_id, n):
    """The n images nearest to file_id by L1 distance of their normalised
    histograms, ties broken by image id"""
    if n < 0:
        raise TypeMismatch("FindSimilar expects a non-negative count")
    query = stored_histogram(context, file_id)
    dictionary_id = context.dictionary.dictionary_id
    best = {}
    for record_id, row in context.store.scan("descriptors"):
        if row.dictionary_id != dictionary_id or row.image_id == file_id:
            continue
        distance = histogram_distance(query, context.store.get_histogram(record_id))
        best[row.image_id] = min(distance, best.get(row.image_id, distance))
    ranked = sorted(best.items(), key=lambda item: (item[1], item[0]))
    return [image_id for image_id, _ in ranked[:n]]


REGISTRY = {
    "GetClassOfImage": get_class_of_image,
    "FindDuplicates": find_duplicates,
    "FindSimilar": find_similar,
}


def call_function(context, call):
    """Evaluates a Call node

    Raises:
        TypeMismatch: if the arguments don't match the function signature

    Returns:
        str or list: the function result
    """
    signature = FUNCTIONS[call.name]
    kinds = tuple(arg.kind for arg in call.args)
    if kinds != signature:
        raise TypeMismatch(
            "{} expects ({}), got ({})".format(call.name, ", ".join(signature), ", ".join(kinds))
        )
    return REGISTRY[call.name](context, *(arg.value for arg in call.args))
