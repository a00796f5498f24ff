#pragma once

#include <string>
#include <string_view>

namespace qsuggest {

// Porter's suffix-stripping stemmer for lowercase ASCII English words.
//
// Follows Martin Porter's reference C implementation, including its two
// departures from the original rule list (step 2 maps "bli" to "ble" instead
// of "abli" to "able", and adds "logi" to "log"), so the output agrees with the
// published voc.txt/output.txt vocabulary. Words of one or two letters are
// returned unchanged.
//
// The input must be lowercase ASCII; bytes outside a-z are treated as
// consonants.
std::string porter_stem(std::string_view word);

}  // namespace qsuggest
