#pragma once

// Parameter pairs of the published reference tables. The row lists are
// fixed so that table output diffs cleanly between runs.

#include <utility>
#include <vector>

namespace slr {

inline const std::vector<std::pair<int, int>>& table1_pairs() {
  static const std::vector<std::pair<int, int>> pairs = {{3, 7}, {3, 8}, {3, 10}, {3, 1000}};
  return pairs;
}

inline const std::vector<std::pair<int, int>>& table2_pairs() {
  static const std::vector<std::pair<int, int>> pairs = {
      {3, 7},  {3, 8},  {3, 10}, {3, 1000}, {4, 5},  {4, 6},  {4, 10}, {4, 1000},
      {5, 4},  {5, 5},  {5, 10}, {5, 1000}, {6, 4},  {6, 5},  {6, 10}, {6, 1000},
      {7, 3},  {7, 4},  {7, 5},  {7, 10},   {7, 1000},
      {8, 3},  {8, 4},  {8, 5},  {8, 10},   {8, 1000}};
  return pairs;
}

inline const std::vector<std::pair<int, int>>& table3_pairs() {
  static const std::vector<std::pair<int, int>> pairs = {
      {10, 3}, {20, 3}, {20, 4}, {20, 5}, {20, 10}, {20, 1000}, {28, 3},
      {29, 3}, {30, 3}, {35, 3}, {40, 3}, {52, 3},  {72, 3}};
  return pairs;
}

/// All distinct table parameter pairs (used by the relation checks).
inline std::vector<std::pair<int, int>> all_table_pairs() {
  std::vector<std::pair<int, int>> pairs = table2_pairs();
  for (const auto& pq : table3_pairs()) pairs.push_back(pq);
  return pairs;
}

}  // namespace slr
