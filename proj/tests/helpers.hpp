#ifndef CEISCHED_TEST_HELPERS_HPP
#define CEISCHED_TEST_HELPERS_HPP

#include "ceisched/model.hpp"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

namespace testing {

using ceisched::Chronon;
using ceisched::EiSpec;
using ceisched::ResourceId;

inline EiSpec ei(std::int32_t resource, Chronon start, Chronon finish)
{
    return EiSpec{ResourceId{resource}, start, finish};
}

// One profile per inner list of CEIs.
inline ceisched::ProfileSet make_set(const std::vector<std::vector<std::vector<EiSpec>>>& profiles)
{
    ceisched::ProfileSetBuilder b;
    for (const auto& ceis : profiles) {
        auto p = b.add_profile();
        for (const auto& c : ceis)
            b.add_cei(p, c);
    }
    return std::move(b).build();
}

inline std::filesystem::path temp_dir()
{
    const char* env = std::getenv("CEISCHED_TEST_TMP");
    auto dir = std::filesystem::path(env ? env : std::filesystem::temp_directory_path().string()) / "ceisched_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testing

#endif
