import logging
from dataclasses import dataclass, field

from bofdb.errors import ModelNotLoaded
from bofdb.helpers import Stopwatch
from bofdb.pipeline.classify import describe_bytes, predict_histogram
from bofdb.store.rows import STAGES, StatsRecord

logger = logging.getLogger(__name__)


@dataclass
class IngestReport:
    """Outcome of ingest_and_classify

    Attributes:
        image_id (int): id of the image (equal to its file_id)
        file_id (int): id of the stored blob
        predicted_class (str): the predicted class
        timings (list): one bofdb.StatsRecord per executed stage
        duplicate_of (list): sorted ids of earlier images with the same
            comparative descriptor
        descriptor_id (int): id of the stored histogram row
    """

    image_id: int
    file_id: int
    predicted_class: str
    timings: list = field(default_factory=list)
    duplicate_of: list = field(default_factory=list)
    descriptor_id: int = None

    def timing(self, stage):
        """Elapsed microseconds of a stage"""
        for record in self.timings:
            if record.stage == stage:
                return record.elapsed_us
        raise KeyError(stage)


def ingest_and_classify(store, data, dictionary, model, extractor=None, name=""):
    """Classification mode: store an image file and everything derived
    from it

    The blob is stored once the file has decoded; its descriptors,
    histogram, comparative descriptor, predicted class and stage timings
    follow.

    Args:
        store (bofdb.Store): the open store
        data (bytes): a PGM/PPM file
        dictionary (bofdb.Dictionary): the loaded dictionary
        model (bofdb.SvmModel): the loaded classifier
        extractor (bofdb.DescriptorExtractor, optional): overrides the
            extractor the dictionary was learned with. Defaults to None.
        name (str, optional): original file name. Defaults to "".

    Raises:
        ModelNotLoaded: if dictionary or model is None
        MalformedImage: if data isn't a valid PGM/PPM file

    Returns:
        IngestReport: the report
    """
    if dictionary is None or model is None:
        raise ModelNotLoaded("no trained dictionary and model are loaded")

    watch = Stopwatch()
    descriptors, histogram = describe_bytes(data, dictionary, extractor, watch=watch)
    with watch.stage("classify"):
        predicted = predict_histogram(histogram, dictionary, model)

    with watch.stage("index"):
        file_id = store.put_blob(data, name)
        descriptors.image_id = file_id
        histogram.image_id = file_id
        store.put_sifts(descriptors)
        descriptor_id = store.insert_descriptor_row(histogram, file_id, dictionary.dictionary_id)
        duplicates = set()
        for record_id in store.lookup_by_hash(histogram.comparative_hash):
            if record_id == descriptor_id:
                continue
            row = store.fetch("descriptors", record_id)
            if row.dictionary_id == dictionary.dictionary_id:
                duplicates.add(row.image_id)
        store.put_image(file_id, predicted, "predicted")
    total = watch.elapsed_us()

    timings = [StatsRecord(file_id, stage, watch.timings[stage]) for stage in STAGES[:-1]]
    timings.append(StatsRecord(file_id, "total", total))
    for record in timings:
        store.record_stat(record)

    logger.info("ingested file %d as %s (%d duplicates)", file_id, predicted, len(duplicates))
    return IngestReport(
        image_id=file_id,
        file_id=file_id,
        predicted_class=predicted,
        timings=timings,
        duplicate_of=sorted(duplicates),
        descriptor_id=descriptor_id,
    )
