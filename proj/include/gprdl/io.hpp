#ifndef GPRDL_IO_HPP
#define GPRDL_IO_HPP

#include <filesystem>
#include <nlohmann/json.hpp>

#include "gprdl/coding.hpp"
#include "gprdl/scene.hpp"
#include "gprdl/svm.hpp"

namespace gprdl {

// Container file layout, common to all persisted types:
//   6-byte magic "SPTR1\n"
//   1-byte kind tag (0=BScan, 1=ProfileMatrix, 2=Dictionary, 3=SceneTruth,
//                    4=SvmModel)
//   4-byte little-endian unsigned header length
//   UTF-8 JSON header (dimensions + per-type metadata)
//   raw payload: IEEE-754 binary64 little-endian, row-major
enum class ContainerKind : unsigned char {
  kBScan = 0,
  kProfileMatrix = 1,
  kDictionary = 2,
  kSceneTruth = 3,
  kSvmModel = 4,
};

void save_bscan(const BScan& b, const std::filesystem::path& path);
BScan load_bscan(const std::filesystem::path& path);

void save_profiles(const ProfileMatrix& pm, const std::filesystem::path& path);
ProfileMatrix load_profiles(const std::filesystem::path& path);

// `provenance` is stored verbatim in the header (training config etc.).
void save_dictionary(const Dictionary& d, const std::filesystem::path& path,
                     const nlohmann::json& provenance = nlohmann::json::object());
Dictionary load_dictionary(const std::filesystem::path& path);
nlohmann::json load_dictionary_provenance(const std::filesystem::path& path);

void save_truth(const SceneTruth& t, const std::filesystem::path& path);
SceneTruth load_truth(const std::filesystem::path& path);

void save_svm_model(const RbfSvmModel& m, const std::filesystem::path& path);
RbfSvmModel load_svm_model(const std::filesystem::path& path);

}  // namespace gprdl

#endif
