// Copyright 2026 the chatweave authors
// SPDX-License-Identifier: Apache-2.0
#include "lexicon.hpp"

#include <algorithm>

#include "text.hpp"

namespace chatweave {

namespace {

const char* const kVerbs[] = {
    "唱歌", "跳舞", "直播", "聊天", "喜欢", "觉得", "知道", "认识", "记得",
    "忘记", "希望", "学习", "工作", "跑步", "做饭", "旅游", "睡觉", "起床",
    "健身", "读书", "画画", "爬山", "游泳", "休息", "感谢", "欢迎", "关注",
    "分享", "介绍", "表演", "练习", "准备", "开始", "结束", "继续", "支持",
    "加油", "点歌", "弹琴", "谢谢", "唱", "跳", "吃", "喝", "玩", "看",
    "听", "想", "爱", "说", "讲", "笑", "哭", "买", "卖", "送", "收",
    "等", "来", "去", "回", "问", "帮", "养", "写", "读", "学", "教",
    "开", "关", "站", "坐", "走", "跑", "找", "给", "拿", "放", "穿",
    "洗", "睡", "醒", "打", "试", "练", "换", "选", "停", "有", "是",
};

const char* const kNouns[] = {
    "猫", "狗", "歌", "歌单", "情歌", "火锅", "经历", "晚上", "每天",
    "今天", "明天", "昨天", "早上", "中午", "下午", "周末", "时间", "朋友",
    "家", "人", "直播间", "观众", "粉丝", "礼物", "音乐", "世界", "主播",
    "大家", "生活", "视频", "手机", "电脑", "游戏", "衣服", "鞋子", "帽子",
    "眼睛", "头发", "声音", "名字", "地方", "城市", "北京", "上海", "学校",
    "老师", "学生", "妈妈", "爸爸", "哥哥", "姐姐", "弟弟", "妹妹", "孩子",
    "女生", "男生", "问题", "故事", "电影", "书", "茶", "咖啡", "啤酒",
    "米饭", "面条", "水果", "苹果", "香蕉", "蛋糕", "鲜花", "天气", "夏天",
    "冬天", "春天", "秋天", "心情", "梦想", "房间", "桌子", "椅子", "公园",
    "山", "海", "花", "树", "鸟", "鱼", "肉", "菜", "汤", "酒", "钱",
    "节目", "舞台", "吉他", "钢琴", "年", "月", "号",
};

const char* const kAdjectives[] = {
    "可爱", "好听", "漂亮", "开心", "高兴", "快乐", "难过", "好看", "有趣",
    "无聊", "温柔", "认真", "努力", "幸福", "健康", "安静", "热闹", "舒服",
    "简单", "容易", "特别", "重要", "累", "饿", "渴", "忙", "好", "大",
    "小", "新", "旧", "高", "矮", "胖", "瘦", "红", "黄", "蓝", "绿",
    "白", "黑", "热", "冷", "甜", "辣", "酸", "苦", "帅", "美", "长",
    "短", "快", "慢", "早", "晚", "远", "近", "多", "少", "难",
};

const char* const kFunctionWords[] = {
    "我们", "你们", "他们", "她们", "咱们", "没有", "非常", "比较", "有点",
    "什么", "怎么", "为什么", "这个", "那个", "这里", "那里", "因为", "所以",
    "但是", "如果", "已经", "正在", "马上", "刚刚", "一起", "我", "你",
    "他", "她", "它", "的", "地", "得", "了", "着", "过", "吗", "呢",
    "吧", "啊", "呀", "哦", "嗯", "哈", "不", "没", "很", "都",
    "也", "还", "就", "才", "又", "再", "最", "太", "真", "挺", "这",
    "那", "和", "跟", "对", "把", "被", "从", "到", "在", "会", "能",
    "可以", "要", "别", "请", "个", "只", "条", "件", "岁", "点", "一",
    "两", "三", "四", "五", "六", "七", "八", "九", "十", "百",
};

std::unordered_set<std::u32string> build_set(const char* const* words,
                                             std::size_t count) {
    std::unordered_set<std::u32string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        CodePoints decoded = decode_utf8(words[i]);
        out.emplace(decoded.cps.begin(), decoded.cps.end());
    }
    return out;
}

}  // namespace

const std::unordered_set<std::u32string>& verb_lexicon() {
    static const auto set = build_set(kVerbs, std::size(kVerbs));
    return set;
}

const std::unordered_set<std::u32string>& noun_lexicon() {
    static const auto set = build_set(kNouns, std::size(kNouns));
    return set;
}

const std::unordered_set<std::u32string>& adjective_lexicon() {
    static const auto set = build_set(kAdjectives, std::size(kAdjectives));
    return set;
}

const std::unordered_set<std::u32string>& function_lexicon() {
    static const auto set = build_set(kFunctionWords, std::size(kFunctionWords));
    return set;
}

std::size_t lexicon_max_word_length() {
    static const std::size_t max_length = [] {
        std::size_t best = 1;
        for (const auto* set : {&verb_lexicon(), &noun_lexicon(),
                                &adjective_lexicon(), &function_lexicon()})
            for (const auto& word : *set) best = std::max(best, word.size());
        return best;
    }();
    return max_length;
}

const std::vector<std::string>& generator_vocabulary() {
    static const std::vector<std::string> vocab = [] {
        std::vector<std::string> out;
        out.reserve(std::size(kVerbs) + std::size(kNouns) + std::size(kAdjectives));
        out.insert(out.end(), std::begin(kVerbs), std::end(kVerbs));
        out.insert(out.end(), std::begin(kNouns), std::end(kNouns));
        out.insert(out.end(), std::begin(kAdjectives), std::end(kAdjectives));
        return out;
    }();
    return vocab;
}

}  // namespace chatweave
