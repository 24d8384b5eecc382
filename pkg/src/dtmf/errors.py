"""Exception types shared by all modules.

Every error carries a stable ``code`` string that the command-line tool
reports in its machine-readable error output.
"""


class DtmfError(ValueError):
    code = "error"


class EmptyMatrix(DtmfError):
    code = "empty_matrix"


class NonFinite(DtmfError):
    code = "non_finite"


class RankOutOfRange(DtmfError):
    code = "rank_out_of_range"


class ConvergenceError(DtmfError):
    code = "no_convergence"


class AllDocumentsEmpty(DtmfError):
    code = "all_documents_empty"


class EmptyQuery(DtmfError):
    code = "empty_query"


class ZeroQuery(DtmfError):
    code = "zero_query"


class ZeroMargin(DtmfError):
    code = "zero_margin"


class DimensionMismatch(DtmfError):
    code = "dimension_mismatch"


class EmptyGroup(DtmfError):
    code = "empty_group"


class MissingLabels(DtmfError):
    code = "missing_labels"


class SingleCategory(DtmfError):
    code = "single_category"


class FormatError(DtmfError):
    code = "bad_format"
