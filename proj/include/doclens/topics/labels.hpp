#pragma once

#include <string>
#include <vector>

#include "doclens/summarize/llm.hpp"
#include "doclens/topics/model.hpp"

namespace doclens::topics {

inline constexpr const char* kLabelPrompt =
    "Give a concise label (at most three words) for a topic whose most important words are: ";

/// Attaches labels verbatim. Throws LabelCountMismatch unless there are K.
TopicModel label_topics(TopicModel model, const std::vector<std::string>& labels);

/// Sends each topic's ten highest-probability words with the fixed labeling
/// prompt. Labels read "topic-<k>: <reply>"; the offline stub replies with
/// the first two words, giving "topic-<k>: w1/w2".
TopicModel label_topics(TopicModel model, const summarize::LlmClient& client);

/// The exact message sent for one topic.
std::string label_prompt(const std::vector<std::string>& words);

}  // namespace doclens::topics
