#include "aybe/errors.hpp"

namespace aybe {

PoleError::PoleError(const std::string& what, std::complex<double> lattice_point, double distance,
                     std::optional<std::pair<int, int>> term)
    : Error(what), lattice_point_(lattice_point), distance_(distance), term_(std::move(term)) {}

}  // namespace aybe
