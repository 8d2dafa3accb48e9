#pragma once

#include <stdexcept>
#include <string>

namespace csim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define CSIM_DEFINE_ERROR(NAME)                                               \
    struct NAME : Error {                                                     \
        using Error::Error;                                                   \
    }

CSIM_DEFINE_ERROR(FileNotFound);
CSIM_DEFINE_ERROR(UnsupportedFormat);
CSIM_DEFINE_ERROR(CorruptData);
CSIM_DEFINE_ERROR(PatchTooLarge);
CSIM_DEFINE_ERROR(InvalidPatchSize);
CSIM_DEFINE_ERROR(DimensionMismatch);
CSIM_DEFINE_ERROR(EmptyInput);
CSIM_DEFINE_ERROR(DomainError);
CSIM_DEFINE_ERROR(LengthMismatch);
CSIM_DEFINE_ERROR(DegenerateWeight);
CSIM_DEFINE_ERROR(InvalidKernel);
CSIM_DEFINE_ERROR(RectOutOfBounds);
CSIM_DEFINE_ERROR(EmptySequence);
CSIM_DEFINE_ERROR(LayoutNotRecognized);
CSIM_DEFINE_ERROR(EmptyRecords);
CSIM_DEFINE_ERROR(InsufficientData);

#undef CSIM_DEFINE_ERROR

} // namespace csim
