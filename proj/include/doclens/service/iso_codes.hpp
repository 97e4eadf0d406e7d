#pragma once

#include <cstddef>
#include <string_view>

namespace doclens::service {

/// True for an officially assigned ISO 3166-1 alpha-2 code (uppercase).
bool is_iso_alpha2(std::string_view code);

std::size_t iso_alpha2_count();
/// Table self-check: strictly ascending.
bool codes_sorted();

}  // namespace doclens::service
