#include "doclens/topics/labels.hpp"

#include "doclens/error.hpp"

namespace doclens::topics {

TopicModel label_topics(TopicModel model, const std::vector<std::string>& labels) {
  if (labels.size() != model.num_topics) {
    throw Error(ErrorCode::LabelCountMismatch, "got " + std::to_string(labels.size()) + " labels for K=" +
                                                   std::to_string(model.num_topics));
  }
  model.labels = labels;
  return model;
}

std::string label_prompt(const std::vector<std::string>& words) {
  std::string msg = kLabelPrompt;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) msg += ", ";
    msg += words[i];
  }
  msg += ".";
  return msg;
}

TopicModel label_topics(TopicModel model, const summarize::LlmClient& client) {
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < model.num_topics; ++k) {
    std::vector<std::string> words;
    for (std::size_t v : top_indices(model.phi.row(k), 10)) words.push_back(model.vocab.at(v));
    summarize::ChatRequest req;
    req.task = summarize::LlmTask::Label;
    req.message = label_prompt(words);
    req.words = words;
    labels.push_back("topic-" + std::to_string(k) + ": " + client.complete(req).text);
  }
  return label_topics(std::move(model), labels);
}

}  // namespace doclens::topics
