"""Exception hierarchy shared across the workbench."""


class BitewatchError(Exception):
    """Base class for all workbench errors."""


class ContractViolation(BitewatchError):
    """A caller broke a documented precondition (e.g. unsorted input)."""


class TraceValidationError(BitewatchError):
    """A motion trace failed validation; carries the anomaly list."""

    def __init__(self, anomalies):
        self.anomalies = list(anomalies)
        lines = "; ".join(str(a) for a in self.anomalies)
        super().__init__(f"trace failed validation: {lines}")


class SynthError(BitewatchError):
    """A meal script is not physically renderable."""


class AdjudicationError(BitewatchError):
    """A decision references an unknown conflict or is otherwise invalid."""


class DatasetError(BitewatchError):
    """Base class for dataset/manifest loading problems."""


class MissingFileError(DatasetError):
    def __init__(self, path):
        self.path = str(path)
        super().__init__(f"missing file: {self.path}")


class DanglingReferenceError(DatasetError):
    def __init__(self, kind, ref):
        self.kind = kind
        self.ref = ref
        super().__init__(f"dangling {kind} reference: {ref!r}")


class EnumValueError(DatasetError):
    def __init__(self, field, value, allowed):
        self.field = field
        self.value = value
        self.allowed = tuple(allowed)
        super().__init__(
            f"invalid {field} value {value!r}; allowed: {{{', '.join(self.allowed)}}}"
        )
